use gpt_workbench::boxworld::{classify_vertex, make_boxworld2};
use gpt_workbench::gpt_core::{make_classical, make_gbit, StateSpace};
use gpt_workbench::ratgeo::vertex_adjacency;
use gpt_workbench::symmetry::*;

fn pr_and_local(space: &StateSpace) -> (Vec<usize>, Vec<usize>) {
    let v = space.vrep().unwrap();
    let mut local = Vec::new();
    let mut pr = Vec::new();
    for (i, x) in v.vertices().iter().enumerate() {
        if classify_vertex(x).unwrap().is_local() {
            local.push(i)
        } else {
            pr.push(i)
        }
    }
    (local, pr)
}

#[test]
fn boxworld_symmetries_preserve_locality() {
    let space = make_boxworld2();
    let g = affine_automorphisms(&space).unwrap();
    eprintln!("boxworld group order {}", g.order());
    assert!(g.satisfies_group_axioms());
    assert!(g.maps_compose_consistently());
    let (v, h) = space.polytope().unwrap();
    for &gi in g.generators() {
        assert!(preserves_hrep(&g.elements()[gi].map, v, h));
    }
    let (local, pr) = pr_and_local(&space);
    let o = orbits(&g, &space).unwrap();
    for class in &o.classes {
        let n_local = class.iter().filter(|i| local.contains(i)).count();
        assert!(n_local == 0 || n_local == class.len());
    }
    let cl = o.class_of(local[0]).unwrap();
    assert!(local.iter().all(|&i| o.class_of(i) == Some(cl)));
    let cp = o.class_of(pr[0]).unwrap();
    assert!(pr.iter().all(|&i| o.class_of(i) == Some(cp)));
    assert_ne!(cl, cp);
    let graph = vertex_adjacency(v, h).unwrap();
    for class in &o.classes {
        assert!(class.iter().all(|&i| graph.degree(i) == graph.degree(class[0])));
        let tags: Vec<bool> = class.iter().map(|&i| classify_vertex(&v.vertices()[i]).unwrap().is_local()).collect();
        assert!(tags.iter().all(|&t| t == tags[0]));
    }
    assert!(matches!(check_reversibility(&space).unwrap(), ReversibilityVerdict::Fail { .. }));
    assert_eq!(
        check_interaction_with_group(&space, &g, &local).unwrap(),
        InteractionVerdict::NonInteracting
    );
}

#[test]
fn gbit_verdicts() {
    let gbit = make_gbit();
    assert_eq!(check_reversibility(&gbit).unwrap(), ReversibilityVerdict::Pass);
    assert_eq!(
        check_continuous_reversibility(&gbit).unwrap(),
        ContinuityVerdict::Fail { failure: ContinuityFailure::FiniteSymmetryGroup { order: 8 } }
    );
}

#[test]
fn classical_composite_interacts() {
    // {0,1} is not closed under the full symmetric group of the simplex.
    let c4 = make_classical(4).unwrap().with_parts("classical-2", "classical-2");
    let g = affine_automorphisms(&c4).unwrap();
    assert_eq!(g.order(), 24);
    let all = [0, 1, 2, 3];
    assert_eq!(check_interaction_with_group(&c4, &g, &all).unwrap(), InteractionVerdict::NonInteracting);
    assert!(matches!(
        check_interaction_with_group(&c4, &g, &[0, 1]).unwrap(),
        InteractionVerdict::Interacting { .. }
    ));
}

#[test]
fn two_classical_bits_as_sixteen_outcome_simplex() {
    let c16 = make_classical(16).unwrap().with_parts("classical-4", "classical-4");
    let all: Vec<usize> = (0..16).collect();
    assert_eq!(check_interaction(&c16, &all).unwrap(), InteractionVerdict::NonInteracting);
}
