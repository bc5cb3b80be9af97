use linkoid::bracket::{normalized_bracket, normalized_ordered_bracket};
use linkoid::corpus::{Corpus, EntryKind};
use linkoid::kbsm::{normalized_skein, normalized_skein_on_sphere};
use linkoid::tcol::t_col;
use linkoid::Diagram;

// Every stored value is recomputed from the diagram file.
#[test]
fn manifest_matches_computed_values() {
    let c = Corpus::bundled().unwrap();
    for e in &c.manifest.entries {
        let d = c.diagram(&e.name).unwrap();
        assert_eq!(d.crossing_count(), e.crossings, "{}", e.name);
        assert_eq!(d.writhe(), e.writhe, "{}", e.name);
        if e.kind == EntryKind::Graph {
            continue;
        }
        let b = normalized_bracket(&d).unwrap().to_string();
        assert_eq!(Some(b.as_str()), e.normalized_bracket.as_deref(), "{}", e.name);
        if let Some(o) = &e.normalized_ordered_bracket {
            assert_eq!(&normalized_ordered_bracket(&d).unwrap().to_string(), o, "{}", e.name);
        }
        if let Some(k) = &e.kbsm {
            assert_eq!(&normalized_skein(&d).unwrap().to_string(), k, "{}", e.name);
        }
        if let Some(k) = &e.kbsm_sphere {
            assert_eq!(&normalized_skein_on_sphere(&d).unwrap().to_string(), k, "{}", e.name);
        }
    }
}

#[test]
fn corpus_files_round_trip() {
    let c = Corpus::bundled().unwrap();
    for e in &c.manifest.entries {
        let d = c.diagram(&e.name).unwrap();
        assert!(d.validate().is_empty(), "{}", e.name);
        let text = d.to_text();
        let back = Diagram::parse(&text).unwrap();
        if e.kind == EntryKind::Graph {
            // edges of a graph are unoriented, so only the text is compared
            assert_eq!(back.to_text(), text, "{}", e.name);
            assert_eq!(t_col(&back).unwrap(), t_col(&d).unwrap(), "{}", e.name);
        } else {
            assert!(back.is_isomorphic(&d), "{}", e.name);
        }
    }
}

#[test]
fn unknown_entry_is_an_error() {
    let c = Corpus::bundled().unwrap();
    assert!(c.diagram("no_such_diagram").is_err());
}

#[test]
fn scrambled_corpus_reaches_ten_crossings() {
    let c = Corpus::bundled().unwrap();
    let big = c.linkoids().filter(|e| e.crossings >= 9).count();
    assert!(big >= 2);
}
