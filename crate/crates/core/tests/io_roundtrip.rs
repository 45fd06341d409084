use kanon_core::generator::barabasi_albert;
use kanon_core::io::{
    load_graph, load_graph_with, load_insertion_pairs, save_graph, write_insertion_set, EdgeListOptions, GraphFormat,
};
use kanon_core::{samples, EdgeInsertionSet, Error, Graph};

#[test]
fn metis_and_edge_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = barabasi_albert(40, 2, 1).unwrap();
    // isolated trailing vertices must survive both formats
    g = Graph::from_edges(g.n() + 2, g.edges()).unwrap();
    for (name, format, base) in [("g.graph", GraphFormat::Metis, 0), ("g.txt", GraphFormat::EdgeList, 0)] {
        let path = dir.path().join(name);
        save_graph(&g, &path, format, base).unwrap();
        assert_eq!(load_graph(&path, format).unwrap(), g);
    }
    let path = dir.path().join("one.txt");
    save_graph(&g, &path, GraphFormat::EdgeList, 1).unwrap();
    let opts = EdgeListOptions { index_base: 1, ..EdgeListOptions::default() };
    assert_eq!(load_graph_with(&path, GraphFormat::EdgeList, opts).unwrap(), g);
}

#[test]
fn insertion_sets_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = EdgeInsertionSet::from_pairs([(0, 2), (0, 3)]).unwrap();
    let path = dir.path().join("s.txt");
    write_insertion_set(&s, std::fs::File::create(&path).unwrap(), 1).unwrap();
    assert_eq!(load_insertion_pairs(&path, 1).unwrap(), vec![(0, 2), (0, 3)]);
    let h = samples::paw().add_edges(&s).unwrap();
    assert_eq!(h.m(), 6);
}

#[test]
fn missing_file_names_the_path() {
    let err = load_graph(std::path::Path::new("/nonexistent/x.graph"), GraphFormat::Metis).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("/nonexistent/x.graph"));
}
