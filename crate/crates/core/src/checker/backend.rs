//! Backends that answer consistency queries.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Outcome;

use super::prompt::prompt_hash;

pub const DEFAULT_API_KEY_ENV: &str = "CODAT_API_KEY";

/// Seed transcripts bundled for replay without a fixture directory.
const SEED_FIXTURES: &[(&str, &str)] = &[
    (
        "fc67a6e0b6dd40d7d0aff39b1cc8c0b185222ee376cf945bb02bc1a5cbff79f4",
        include_str!("../../fixtures/llm/fc67a6e0b6dd40d7d0aff39b1cc8c0b185222ee376cf945bb02bc1a5cbff79f4.txt"),
    ),
    (
        "0f2ef4da260cc54c65bb14ba7aff6bccb557b50de5edac8a202c1ed1fd5ca1f7",
        include_str!("../../fixtures/llm/0f2ef4da260cc54c65bb14ba7aff6bccb557b50de5edac8a202c1ed1fd5ca1f7.txt"),
    ),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendConfig {
    /// POSTs `{"input": prompt}` and reads `{"output": text}`.
    Http {
        endpoint_url: String,
        /// Name of the environment variable holding the bearer token.
        api_key_env: String,
        timeout: Duration,
        max_retries: u32,
    },
    /// Serves `<fixture_dir>/<prompt hash>.txt`, or the bundled seed
    /// transcripts when no directory is given.
    Replay { fixture_dir: Option<PathBuf> },
    /// Answers every query with a canned response for `outcome`.
    Constant { outcome: Outcome },
}

impl BackendConfig {
    pub fn validate(&self) -> Result<()> {
        if let BackendConfig::Http {
            timeout, endpoint_url, ..
        } = self
        {
            if timeout.is_zero() {
                return Err(Error::Config("backend timeout must be positive".into()));
            }
            if endpoint_url.is_empty() {
                return Err(Error::Config("http backend needs an endpoint URL".into()));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn Backend>> {
        self.validate()?;
        Ok(match self {
            BackendConfig::Http {
                endpoint_url,
                api_key_env,
                timeout,
                max_retries,
            } => Box::new(HttpBackend::new(endpoint_url, api_key_env, *timeout, *max_retries)?),
            BackendConfig::Replay { fixture_dir } => Box::new(ReplayBackend::new(fixture_dir.clone())),
            BackendConfig::Constant { outcome } => Box::new(ConstantBackend { outcome: *outcome }),
        })
    }
}

/// Something that answers a prompt with free text.
pub trait Backend: Send + Sync {
    /// Short identifier recorded in verdicts.
    fn id(&self) -> &str;
    fn complete(&self, prompt: &str) -> Result<String>;
}

pub struct ReplayBackend {
    dir: Option<PathBuf>,
    seeds: HashMap<&'static str, &'static str>,
}

impl ReplayBackend {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            seeds: SEED_FIXTURES.iter().copied().collect(),
        }
    }
}

impl Backend for ReplayBackend {
    fn id(&self) -> &str {
        "replay"
    }

    fn complete(&self, prompt: &str) -> Result<String> {
        let key = prompt_hash(prompt);
        match &self.dir {
            Some(dir) => {
                let path = dir.join(format!("{key}.txt"));
                match std::fs::read_to_string(&path) {
                    Ok(text) => Ok(text),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingFixture(key)),
                    Err(e) => Err(Error::io(path, e)),
                }
            }
            None => self
                .seeds
                .get(key.as_str())
                .map(|s| s.to_string())
                .ok_or(Error::MissingFixture(key)),
        }
    }
}

pub struct ConstantBackend {
    pub outcome: Outcome,
}

impl Backend for ConstantBackend {
    fn id(&self) -> &str {
        "constant"
    }

    fn complete(&self, _prompt: &str) -> Result<String> {
        Ok(match self.outcome {
            Outcome::Consistent => "Yes, the code matches the comment at the top.",
            Outcome::Inconsistent => "No, the code does not match the comment at the top.",
            Outcome::Unknown => "I cannot tell from the code shown.",
        }
        .to_string())
    }
}

#[derive(Serialize)]
struct Request<'a> {
    input: &'a str,
}

#[derive(Deserialize)]
struct Response {
    output: String,
}

pub struct HttpBackend {
    client: reqwest::blocking::Client,
    url: String,
    api_key: String,
    timeout: Duration,
    max_retries: u32,
}

const BACKOFF_BASE: Duration = Duration::from_millis(200);

impl HttpBackend {
    pub fn new(url: &str, api_key_env: &str, timeout: Duration, max_retries: u32) -> Result<Self> {
        let api_key = std::env::var(api_key_env).map_err(|_| Error::MissingApiKey(api_key_env.to_string()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| Error::TransportFailure(e.to_string()))?;
        Ok(Self {
            client,
            url: url.to_string(),
            api_key,
            timeout,
            max_retries,
        })
    }

    fn attempt(&self, prompt: &str) -> std::result::Result<String, Attempt> {
        let resp = self
            .client
            .post(&self.url)
            .bearer_auth(&self.api_key)
            .json(&Request { input: prompt })
            .send()
            .map_err(|e| {
                if e.is_timeout() {
                    Attempt::Retry(Error::Timeout(self.timeout))
                } else {
                    Attempt::Retry(Error::TransportFailure(e.to_string()))
                }
            })?;
        let status = resp.status();
        if status.is_server_error() {
            return Err(Attempt::Retry(Error::TransportFailure(format!("server returned {status}"))));
        }
        if !status.is_success() {
            return Err(Attempt::Fatal(Error::TransportFailure(format!("server returned {status}"))));
        }
        let body: Response = resp.json().map_err(|e| {
            if e.is_timeout() {
                Attempt::Retry(Error::Timeout(self.timeout))
            } else {
                Attempt::Fatal(Error::TransportFailure(format!("malformed response: {e}")))
            }
        })?;
        Ok(body.output)
    }
}

enum Attempt {
    Retry(Error),
    Fatal(Error),
}

impl Backend for HttpBackend {
    fn id(&self) -> &str {
        "http"
    }

    fn complete(&self, prompt: &str) -> Result<String> {
        let mut tries = 0;
        loop {
            match self.attempt(prompt) {
                Ok(out) => return Ok(out),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(e)) if tries >= self.max_retries => return Err(e),
                Err(Attempt::Retry(e)) => {
                    let wait = BACKOFF_BASE * 2u32.pow(tries.min(10));
                    tracing::warn!("{e}; retrying in {wait:?}");
                    std::thread::sleep(wait);
                    tries += 1;
                }
            }
        }
    }
}
