/// Process exit statuses. These are a stable contract for scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Clean = 0,
    Operational = 1,
    Grammar = 2,
    Drift = 3,
    Inconsistent = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}
