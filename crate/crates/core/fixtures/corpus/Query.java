public class Query {

    //CS1 OVERVIEW: Maintains the keywords w_0,...,w_{k-1} of a query and the list of documents
    //CS2  that match those keywords. The list is ordered by total occurrence count, i.e,
    //CS3 sum of occurrences of w_0,...,w_{k-1} in each document. Also each of w_0,...,w_{k-1}
    // must occur at least once in each matching document.
    // size returns the number of matches.
    // Documents can be accessed using indexes between 0 and size-1 inclusive.
    // Documents are ordered by the number of matches they contain,
    // with document 0 containing the most matches.

    private WordTable k;
    private ArrayList matches; //ArrayList of DocCnt objects. Replaces Vector used in the design.
    private String[] keys;  //The keywords used in the current query

    //Constructors

    public Query() throws NotPossibleException, FileNotFoundException {
        //EFFECTS: Returns the empty query.

        k = new WordTable();                 //WordTable containing only the uninteresting words.
        matches = new ArrayList<DocCnt>();           //empty ArrayList
        keys = new String[0];                //empty Array

    }


    public Query(WordTable wt, String w) {
        //SP1: REQUIRES: wt and w are not null
        //SP2: EFFECTS: Makes a query for the single keyword w
        //SP3: HELPS: Engine.queryFirst(w)

        //SKETCH:
        //CS0:   Set keys to the single string w
        //CS1:   Look up the key w in the WordTable by invoking wt.lookup(w)
        //CS2:   Sort the matches on the count


        k = wt;                              //Set k to the current WordTable;

        //CS0: Set keys to the single string w
        keys = new String[1];
        keys[0] = w;

        //CS1:   Look up the key w in the WordTable by invoking wt.lookup(w)
        matches = k.lookup(w);
        //Get ArrayList of DocCnt objects that give
        //matches for w. (d,c) in matches means w occurs c times in document d.

        //AS0: matches contains an unsorted list of all documents d containing w, together
        //AS1: with the number of times c that w occurs in d, AND every document containing w
        //is in matches.
        //AS2: Formally:
        //AS3:   (A m : m in matches : m.getCnt() = sumKey(m.getDoc(),w)) /\
        //AS4:   (A d : d in Doc and sumKey(d,w) > 0 : (E m : m in matches : m.getDoc() = d))

        //CS2:   Sort the matches on the count
        Collections.sort(matches, new SortByCount());

        //Assert: as above but now matches is sorted on the occurrence count c of w
        //in each matching document d

    }


    // METHODS



    void addKey(String w) throws NotPossibleException {
        //REQUIRES: w is not null
        //MODIFIES: this
        //EFFECTS: If this is empty or w in Key throws NotPossibleException else
        //   modifies this to contain the query for Key union {w},
        //   i.e., w plus the keywords already in the query.
        //HELPS: Engine.queryMore(w)
        //IMPL:
        //CS0:  Throw exception if w is not a valid key for addition to this
        //CS1:  Add w to Key.
        //CS2:  Look up w in the WordTable and store the information about
        //       matches on w in a hash table H
        //CS3:  For each current matching document d:
        //       look up d in the hash table H and
        //       if it is there, store it in an ArrayList A with updated total occurrence count
        //       sort A
        //       set current matches to A


        //CS0:  Throw exception if w is not a valid key for addition to this
        if (matches.size()==0) throw new NotPossibleException();  //this is empty
        for(int i = 0; i < keys.length; i=i+1)
            if (w.equals(keys[i])) throw new NotPossibleException();  //w already in Key

        //Now modify this to contain the query for keys union {w}.

        //CS1:  Add w to keys
        String[] newKeys = new String[keys.length+1];  //new array is one position larger
        for(int i = 0; i < keys.length; i=i+1)         //copy over old keys
            newKeys[i] = keys[i];
        newKeys[keys.length] = w;                      //add w
        keys = newKeys;                                //assign reference to keys array

        //CS2:  Look up w in the WordTable and
        //For each document d in which w occurs c times, 
        //store (d,c) in a hash table H, with d’s title as the lookup key


        //Level 2 impl. sketch
        //let l = (d_0,c_0)...(d_{n-1},c_{n-1}) be the result of looking up w in WordTable
        //declare a hash table H
        //for each element (wd,wc) of l
        //     store (wd,wc) in H using d.title() as the key

        ArrayList l = (ArrayList) k.lookup(w);
        Map H = new HashMap();
        for (int i=0; i < l.size(); i=i+1) {
            DocCnt w_dc = (DocCnt) l.get(i);
            H.put(w_dc.getDoc().getTitle(), w_dc);
        }


        //CS3:  For each current match,
        //    look up the document in the hash table H and
        //    if it is there, store it in an ArrayList
        //  Sort the ArrayList

        //Level 2 impl. sketch
        //declare an arraylist A of DocCnt
        //for each (m_d, m_c) in matches, i.e., each current match
        //    look up m_d.title() in H, which is the hashtable computed above for 
        //         matches on w only
        //    if H(m_d.title()) = (w_d, w_c), then add (m_d, m_c + w_c) to A
        //    else do nothing //H(m_d.title()) = null, so w does not occur in m_d
        //Sort A on the count field

        ArrayList<DocCnt> A = new ArrayList<DocCnt>();
        for (int i=0; i < matches.size(); i=i+1) {
            DocCnt m_dc = (DocCnt) matches.get(i);
            Doc m_d = m_dc.getDoc();
            int m_c = m_dc.getCnt();
            DocCnt H_dc = (DocCnt) H.get(m_d.getTitle());  //H(m_d.title())
            if (H_dc != null) {
                DocCnt New_dc = new DocCnt(m_d, m_c + H_dc.getCnt());
                A.add(New_dc);
            }
        }
        //Sort A on the count field
        Collections.sort(A, new SortByCount());

        //Update matches
        matches = A;

    }





    void addDoc(Doc d, Map h) {
        //REQUIRES: d is not null and h maps strings (the
        //   interesting words in d) to integers (the occurrence
        //   count of the word in d)
        //MODIFIES: this
        //EFFECTS: If each keyword of this is in h,
        //              adds d to the matches of this.
        //HELPS: Engine.addDocs(u), Engine.addDocFromFile(f)
        //Code sketch:
        //CS1:   If the map h for document d contains all the keywords,
        //CS2:        compute the total occurrence count sum for all keywords and
        //CS3:        insert the <d,sum> pair in the ArrayList of matches.
        //CS4:    Otherwise leave matches unchanged.
        //CS5:    In either case, return the resulting query.


        //CS1:   If the map h for document d contains all the keywords,
        boolean b = true;
        for(int i = 0; i < keys.length; i=i+1)
            b = b && h.containsKey(keys[i]);
        //{b iff d contains all the keywords}

        if (!b) return;   //Return with query unchanged

        //{b}
        //{d contains all the keywords}
        //Now update matches as required.

        //CS2:        compute the total occurrence count sum for all keywords
        int sm = 0;
        for(int i = 0; i < keys.length; i=i+1)
            sm = sm + ((Integer) h.get(keys[i])).intValue();
        //{sm = sumAll(d,keys)}

        //CS3:        insert the <d,sum> pair in the ArrayList of matches.
        DocCnt dc = new DocCnt(d,sm);    //construct <d,sum>
        matches.add(dc);                 //add it to matches
        Collections.sort(matches, new SortByCount());  //re-sort matches

    }


    public String[] keys() {
        //EFFECTS: Returns the keywords of this, ie Key

        return keys;   //WARNING: exposes rep
    }


    public int size() {
        //EFFECTS: Returns a count of the documents that match the query

        return matches.size();
    }


    public Doc fetch(int i) throws IndexOutOfBoundsException {
        //EFFECTS: If $0 \le i < \size$ returns the $i$'th matching
        //   document else throws IndexOutOfBoundsException

        if (0 <= i && i < matches.size())
            return ((DocCnt) matches.get(i)).getDoc();
        else
            throw new IndexOutOfBoundsException("Query.fetch");
    }


    public String toString() {
        String s;

        s = matches.size() + " matches:\n";  
        //	for(int i=0; i < matches.size(); i=i+1)
        //	    s = s + (((DocCnt) matches.get(i)).getDoc()).getTitle() + "\n";

        for(int i=0; i < matches.size(); i=i+1) {
            DocCnt dc = (DocCnt) matches.get(i);
            Doc d = dc.getDoc();
            String t = d.getTitle();
            int c = dc.getCnt();
            s = s + "Document \"" + t + "\" contains " + c + " matches\n";
        }

        return s;
    }

}
