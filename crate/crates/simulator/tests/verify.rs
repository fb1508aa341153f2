use relim_family::ArbdefectVector;
use relim_problems::{parse_problem, Label};
use relim_simulator::{
    verify, verify_arbdefective, verify_labeling, verify_ruling, ArbdefectiveColoring, Edge, HalfEdgeLabeling,
    Instance, RulingSetOutput, Solution, VerifyKind,
};

fn path(n: usize) -> Instance {
    let edges = (0..n - 1).map(|i| Edge { u: i, v: i + 1, port_u: if i == 0 { 1 } else { 2 }, port_v: 1 }).collect();
    Instance::new(n, edges, 0).unwrap()
}

fn ruling(members: Vec<usize>, colors: Vec<u32>, orientation: Vec<(usize, usize)>, alpha: u32, c: u32, beta: u32) -> RulingSetOutput {
    RulingSetOutput { members, colors, orientation, alpha, c, beta, rounds: 0 }
}

#[test]
fn valid_mis_is_accepted() {
    let inst = path(5);
    assert!(verify_ruling(&inst, 0, 1, 1, &ruling(vec![0, 2, 4], vec![0; 3], vec![], 0, 1, 1)).ok);
    assert!(verify_ruling(&inst, 0, 1, 1, &ruling(vec![1, 3], vec![0; 2], vec![], 0, 1, 1)).ok);
    let far = verify_ruling(&inst, 0, 1, 1, &ruling(vec![0, 4], vec![0; 2], vec![], 0, 1, 1));
    assert_eq!(far.violations, vec!["node 2 is at distance 2 from the set, more than 1"]);
    assert!(verify_ruling(&inst, 0, 1, 2, &ruling(vec![0, 4], vec![0; 2], vec![], 0, 1, 2)).ok);
}

#[test]
fn overloaded_out_edges_are_reported() {
    let inst = path(3);
    // All three nodes in the set with the same color; node 1 points to both neighbors.
    let sol = ruling(vec![0, 1, 2], vec![0; 3], vec![(1, 0), (1, 2)], 1, 1, 0);
    let verdict = verify_ruling(&inst, 1, 1, 0, &sol);
    assert!(!verdict.ok);
    assert_eq!(verdict.violations, vec!["node 1 of color 0 has 2 out-neighbors of its color, more than 1"]);
    let balanced = ruling(vec![0, 1, 2], vec![0; 3], vec![(0, 1), (1, 2)], 1, 1, 0);
    assert!(verify_ruling(&inst, 1, 1, 0, &balanced).ok);
    let missing = ruling(vec![0, 1, 2], vec![0; 3], vec![(0, 1)], 1, 1, 0);
    assert!(verify_ruling(&inst, 1, 1, 0, &missing).violations.iter().any(|v| v.contains("no orientation")));
}

#[test]
fn malformed_ruling_outputs() {
    let inst = path(3);
    assert!(!verify_ruling(&inst, 0, 1, 1, &ruling(vec![1], vec![1], vec![], 0, 1, 1)).ok);
    assert!(!verify_ruling(&inst, 0, 1, 1, &ruling(vec![1, 1], vec![0, 0], vec![], 0, 1, 1)).ok);
    assert!(!verify_ruling(&inst, 0, 1, 1, &ruling(vec![7], vec![0], vec![], 0, 1, 1)).ok);
    assert!(!verify_ruling(&inst, 0, 1, 1, &ruling(vec![1], vec![0], vec![], 0, 1, 2)).ok);
    assert!(!verify_ruling(&inst, 0, 1, 1, &ruling(vec![1], vec![], vec![], 0, 1, 1)).ok);
}

#[test]
fn arbdefect_bounds_per_color() {
    let inst = path(4);
    let d = ArbdefectVector::new(vec![1, 0]).unwrap();
    let ok = ArbdefectiveColoring { colors: vec![0, 0, 1, 0], oriented_edges: vec![(0, 1), (1, 2), (3, 2)] };
    assert!(verify_arbdefective(&inst, &d, &ok).ok);
    let bad = ArbdefectiveColoring { colors: vec![1, 1, 0, 0], oriented_edges: vec![(0, 1), (1, 2), (2, 3)] };
    assert_eq!(
        verify_arbdefective(&inst, &d, &bad).violations,
        vec!["node 0 of color 1 has 1 out-neighbors of its color, more than 0"]
    );
    let twice = ArbdefectiveColoring { colors: vec![0, 1, 0, 1], oriented_edges: vec![(0, 1), (1, 0), (2, 3)] };
    assert!(!verify_arbdefective(&inst, &d, &twice).ok);
    let not_edge = ArbdefectiveColoring { colors: vec![0, 1, 0, 1], oriented_edges: vec![(0, 2), (1, 2), (2, 3)] };
    assert!(!verify_arbdefective(&inst, &d, &not_edge).ok);
    let out_of_range = ArbdefectiveColoring { colors: vec![0, 2, 0, 1], oriented_edges: vec![(0, 1), (1, 2), (2, 3)] };
    assert!(!verify_arbdefective(&inst, &d, &out_of_range).ok);
}

#[test]
fn labelings_constrain_only_full_degree_nodes() {
    // Sinkless orientation on degree 2: one outgoing edge per node.
    let p = parse_problem("nodes:\nO I\nedges:\nO I\n").unwrap();
    let inst = path(3);
    let l = |s: &str| Label::plain(s);
    let good = HalfEdgeLabeling { labels: vec![vec![l("I")], vec![l("O"), l("I")], vec![l("O")]] };
    assert!(verify_labeling(&inst, &p, &good).ok);
    // The endpoints have degree 1 and are free, but edges are always checked.
    let bad_edge = HalfEdgeLabeling { labels: vec![vec![l("O")], vec![l("O"), l("I")], vec![l("O")]] };
    let v = verify_labeling(&inst, &p, &bad_edge);
    assert_eq!(v.violations.len(), 1);
    assert!(v.violations[0].starts_with("edge 0-1"));
    let bad_node = HalfEdgeLabeling { labels: vec![vec![l("I")], vec![l("O"), l("O")], vec![l("I")]] };
    assert!(verify_labeling(&inst, &p, &bad_node).violations[0].starts_with("node 1"));
    let short = HalfEdgeLabeling { labels: vec![vec![l("I")], vec![l("O")], vec![l("O")]] };
    assert!(!verify_labeling(&inst, &p, &short).ok);
    let unknown = HalfEdgeLabeling { labels: vec![vec![l("I")], vec![l("Q"), l("I")], vec![l("O")]] };
    assert!(!verify_labeling(&inst, &p, &unknown).ok);
}

#[test]
fn dispatch_and_json_shapes() {
    let inst = path(3);
    let sol = Solution::Ruling(ruling(vec![1], vec![0], vec![], 0, 1, 1));
    assert!(verify(&VerifyKind::Ruling { alpha: 0, c: 1, beta: 1 }, &inst, &sol).ok);
    let d = ArbdefectVector::new(vec![0]).unwrap();
    assert!(!verify(&VerifyKind::Arbdefective { defects: d }, &inst, &sol).ok);
    let text = serde_json::to_string(&sol).unwrap();
    assert_eq!(serde_json::from_str::<Solution>(&text).unwrap(), sol);
    let coloring: Solution = serde_json::from_str(r#"{"colors":[0,1,0],"orientedEdges":[[1,0],[1,2]]}"#).unwrap();
    assert!(matches!(coloring, Solution::Arbdefective(_)));
    let labeling: Solution = serde_json::from_str(r#"{"labels":[["I"],["O","I"],["O"]]}"#).unwrap();
    assert!(matches!(labeling, Solution::Labeling(_)));
}
