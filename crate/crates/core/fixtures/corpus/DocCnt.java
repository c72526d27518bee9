public class DocCnt {
    //OVERVIEW: Implements DocCnt objects, which are a pair (d,c) consisting of
    //      a document (Doc) d and a count (int) c.
    //      Indicates that some particular word occurs c times in document d.

    Doc doc;
    int count;

    //constructors

    public DocCnt(Doc d, int c) {
        //EFFECTS: Initializes this to (d, c)
        doc = d;
        count = c;
    }

    //methods

    public Doc getDoc() {
        //EFFECTS: returns this.doc, i.e, the document of the DocCnt object.

        return this.doc;
    }


    public int getCnt() {
        //EFFECTS: returns this.count, i.e, the count of the DocCnt object.

        return this.count;
    }

    public String toString() {

        String s;
        s = doc.getTitle() + " doc.getCnt()";
        return s;
    }

}
