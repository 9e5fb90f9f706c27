use cdel_core::io::{parse_edge_list, write_edge_list};
use cdel_core::Graph;
use proptest::prelude::*;

fn graphs() -> impl Strategy<Value = Graph> {
    (1usize..20).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..40).prop_map(move |pairs| {
            let mut g = Graph::new(n);
            for (a, b) in pairs {
                if a != b {
                    g.add_edge(a, b);
                }
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn round_trip(g in graphs()) {
        let text = write_edge_list(&g, &["generated"]);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn parser_never_panics(text in "[0-9p #\n-]{0,60}") {
        let _ = parse_edge_list(&text);
    }
}
