//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::qubit;
use common::{oracle_vertices, q, random_hrep, Q};
use gpt_workbench::boxworld::*;
use gpt_workbench::gpt_core::*;
use gpt_workbench::postulates::*;
use gpt_workbench::ratgeo::rational::{half, int_vector};
use gpt_workbench::ratgeo::*;
use gpt_workbench::symmetry::*;
use gpt_workbench::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

struct Boxworld {
    space: StateSpace,
    local: Vec<bool>,
}

fn boxworld() -> Boxworld {
    let space = make_boxworld2();
    let local = space.vrep().unwrap().vertices().iter().map(|t| classify_vertex(t).unwrap().is_local()).collect();
    Boxworld { space, local }
}

fn census() -> Outcome {
    let v = vertex_enumeration(&build_ns_hrep()).map_err(|e| e.to_string())?;
    let classes: Vec<VertexClass> = v.vertices().iter().map(|t| classify_vertex(t).unwrap()).collect();
    let local = classes.iter().filter(|c| c.is_local()).count();
    let pr = classes.iter().filter(|c| matches!(c, VertexClass::PRBox { .. })).count();
    ensure!(v.len() == 24 && local == 16 && pr == 8, "{} vertices: {local} local, {pr} PR", v.len());
    Ok("24 vertices = 16 local deterministic + 8 PR boxes".into())
}

fn dimension(bw: &Boxworld) -> Outcome {
    let d = bw.space.affine_dimension();
    ensure!(d == 8, "affine dimension {d}");
    Ok("affine dimension 8".into())
}

fn adjacency(bw: &Boxworld) -> Outcome {
    let (v, h) = bw.space.polytope().unwrap();
    let g = vertex_adjacency(v, h).map_err(|e| e.to_string())?;
    for i in 0..v.len() {
        let nb = g.neighbors(i);
        let n_local = nb.iter().filter(|&&j| bw.local[j]).count();
        let n_pr = nb.len() - n_local;
        if bw.local[i] {
            ensure!((nb.len(), n_local, n_pr) == (17, 13, 4), "local vertex {i}: {} = {n_local} + {n_pr}", nb.len());
        } else {
            ensure!((nb.len(), n_local) == (8, 8), "PR vertex {i}: {} neighbours, {n_local} local", nb.len());
        }
    }
    Ok("local degree 17 = 13 local + 4 PR; PR degree 8, all local".into())
}

fn orbit_separation(bw: &Boxworld) -> Outcome {
    let g = affine_automorphisms(&bw.space).map_err(|e| e.to_string())?;
    ensure!(g.satisfies_group_axioms(), "group axioms fail");
    for e in g.elements() {
        for (i, &j) in e.perm.iter().enumerate() {
            ensure!(bw.local[i] == bw.local[j], "symmetry maps vertex {i} to {j} across classes");
        }
    }
    let o = orbits(&g, &bw.space).map_err(|e| e.to_string())?;
    for class in &o.classes {
        ensure!(class.iter().all(|&i| bw.local[i] == bw.local[class[0]]), "mixed orbit {class:?}");
    }
    Ok(format!("group order {}, {} orbits, none mixing local and PR", g.order(), o.classes.len()))
}

fn gbit_symmetry() -> Outcome {
    let gbit = make_gbit();
    let g = affine_automorphisms(&gbit).map_err(|e| e.to_string())?;
    ensure!(g.order() == 8, "gbit group order {}", g.order());
    let o = orbits(&g, &gbit).unwrap();
    ensure!(o.classes.len() == 1, "gbit not vertex-transitive");
    let verdict = check_continuous_reversibility(&gbit).unwrap();
    ensure!(
        verdict == ContinuityVerdict::Fail { failure: ContinuityFailure::FiniteSymmetryGroup { order: 8 } },
        "gbit continuity verdict {verdict:?}"
    );
    let verdict = check_continuous_reversibility(&make_ball3()).unwrap();
    ensure!(matches!(verdict, ContinuityVerdict::Pass { .. }), "ball verdict {verdict:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = vec![([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]), ([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]), ([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0])];
    for _ in 0..20 {
        let pure = |a: [f64; 3]| {
            let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            [a[0] / n, a[1] / n, a[2] / n]
        };
        pairs.push((pure(qubit::random_ball_vector(&mut rng)), pure(qubit::random_ball_vector(&mut rng))));
    }
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let (sa, sb) = (BlochState::new(a).unwrap(), BlochState::new(b).unwrap());
        let path = RotationPath::between(&sa, &sb).map_err(|e| e.to_string())?;
        let check = path.check(&sa, &sb, 100);
        ensure!(check.passes(1e-9, path.angle), "path {a:?} -> {b:?}: {check:?}");
        worst = worst.max(check.endpoint_error);
    }
    Ok(format!("gbit order 8, transitive, FiniteSymmetryGroup; ball paths pass (max endpoint error {worst:.1e})"))
}

fn chsh(bw: &Boxworld) -> Outcome {
    let v = bw.space.vrep().unwrap();
    for (t, &local) in v.vertices().iter().zip(&bw.local) {
        let m = chsh_max(&ProbabilityTable::new(t.clone()).unwrap());
        let expected = if local { q(2, 1) } else { q(4, 1) };
        ensure!(m == expected, "chsh_max {m} on a {} vertex", if local { "local" } else { "PR" });
    }
    let h = bw.space.hrep().unwrap();
    for variant in ChshVariant::all() {
        let r = solve_lp(&variant.functional(), Sense::Max, h).map_err(|e| e.to_string())?;
        ensure!(r.optimum() == Some(&q(4, 1)), "LP maximum of {:?}: {:?}", variant.signs(), r.optimum());
    }
    let pi = std::f64::consts::PI;
    let quantum = quantum_chsh_table([0.0, pi / 2.0], [pi / 4.0, -pi / 4.0]).chsh_max();
    ensure!((quantum - 2.0 * 2f64.sqrt()).abs() < 1e-9, "quantum CHSH {quantum}");
    Ok(format!("PR 4, local 2, LP 4 for all 8 variants, quantum {quantum:.10}"))
}

fn encoding() -> Outcome {
    let gbit = make_gbit();
    let EncodingVerdict::Fail { witness } = check_no_simultaneous_encoding(&gbit).unwrap() else {
        return Err("gbit passes No Simultaneous Encoding".into());
    };
    for b in 0..2 {
        for bp in 0..2 {
            ensure!(witness.state(b, bp) == &int_vector(&[b as i64, bp as i64]), "witness is not the corner set");
        }
    }
    ensure!(witness.verify(&gbit).unwrap(), "witness fails direct re-evaluation");
    let system = joint_readout_system(&witness, &gbit).unwrap();
    let joint = check_joint_readout(&witness, &gbit).unwrap();
    match joint.farkas() {
        Some(cert) => ensure!(cert.verify(&system), "Farkas certificate does not verify"),
        None => return Err(format!("joint readout {:?}", joint.status())),
    }
    let disturbance = check_disturbance(&gbit, &witness).unwrap();
    ensure!(matches!(disturbance, DisturbanceVerdict::Confirmed { .. }), "disturbance {disturbance:?}");
    Ok("corner witness; joint readout infeasible (certificate verified); disturbance confirmed".into())
}

fn tomographic_locality() -> Outcome {
    let gbit = make_gbit();
    let r = check_tomographic_locality(&gbit, &gbit, &make_boxworld2()).unwrap();
    ensure!((r.dim_a, r.dim_b, r.dim_ab, r.pass) == (3, 3, 9, true), "gbit pair {r:?}");
    let c2 = make_classical(2).unwrap();
    let r = check_tomographic_locality(&c2, &c2, &make_classical(4).unwrap()).unwrap();
    ensure!((r.dim_a, r.dim_b, r.dim_ab, r.pass) == (2, 2, 4, true), "classical pair {r:?}");
    Ok("3 x 3 = 9 and 2 x 2 = 4".into())
}

fn decomposition() -> Outcome {
    let gbit = make_gbit();
    let v = gbit.vrep().unwrap();
    let mut found: Vec<Vec<Vec<Q>>> = decompose_state(&[half(), half()], &gbit)
        .unwrap()
        .into_iter()
        .map(|d| {
            let mut pts: Vec<Vec<Q>> = d.vertices.iter().map(|&i| v.vertices()[i].clone()).collect();
            pts.sort();
            assert!(d.weights.iter().all(|w| *w == half()));
            pts
        })
        .collect();
    found.sort();
    let expected = vec![
        vec![int_vector(&[0, 0]), int_vector(&[1, 1])],
        vec![int_vector(&[0, 1]), int_vector(&[1, 0])],
    ];
    ensure!(found == expected, "gbit centre decompositions {found:?}");
    let tetra = make_classical(4).unwrap();
    let interior = [q(1, 10), q(2, 10), q(3, 10), q(4, 10)];
    let d = decompose_state(&interior, &tetra).unwrap();
    ensure!(d.len() == 1 && d[0].vertices.len() == 4, "simplex decompositions {d:?}");
    Ok("gbit centre: both diagonals with weights 1/2; simplex interior: unique".into())
}

fn bloch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut eig_err: f64 = 0.0;
    for _ in 0..1000 {
        let a = qubit::random_ball_vector(&mut rng);
        let s = BlochState::new(a).unwrap();
        let rho = qubit::to_na(&bloch_density(&s));
        let mut ev: Vec<f64> = rho.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let [hi, lo] = s.eigenvalues();
        eig_err = eig_err.max((ev[0] - hi).abs()).max((ev[1] - lo).abs());
    }
    ensure!(eig_err < 1e-10, "eigenvalue error {eig_err:e}");
    let mut rot_err: f64 = 0.0;
    for _ in 0..100 {
        let u = qubit::random_unitary(&mut rng);
        let r = unitary_to_rotation(&qubit::from_na(&u)).map_err(|e| e.to_string())?;
        let a = qubit::random_ball_vector(&mut rng);
        let lhs = qubit::density(gpt_workbench::gpt_core::bloch::apply3(&r, &a));
        let rhs = u * qubit::density(a) * u.adjoint();
        rot_err = rot_err.max((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    ensure!(rot_err < 1e-9, "rotation round-trip error {rot_err:e}");
    Ok(format!("eigenvalue error {eig_err:.1e}, rotation round-trip error {rot_err:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut nonempty, mut total_vertices) = (0, 0);
    for case in 0..200 {
        let d = 1 + case % 4;
        let h = random_hrep(&mut rng, d);
        let expected = oracle_vertices(&h);
        match vertex_enumeration(&h) {
            Ok(v) => {
                ensure!(v.vertices() == expected.as_slice(), "case {case}: {} vs oracle {}", v.len(), expected.len());
                nonempty += 1;
                total_vertices += v.len();
            }
            Err(Error::Empty) => ensure!(expected.is_empty(), "case {case}: reported empty, oracle has {}", expected.len()),
            Err(e) => return Err(format!("case {case}: {e}")),
        }
    }
    Ok(format!("200 random H-reps agree ({nonempty} nonempty, {total_vertices} vertices)"))
}

fn postulate_report() -> Outcome {
    let r = run_report(&ReportConfig::new("gbit", Some("boxworld2"))).map_err(|e| e.to_string())?;
    let res = &r.results;
    let row = [
        ("continuous reversibility", res.ContinuousReversibility.is_fail()),
        ("tomographic locality", res.TomographicLocality.is_pass()),
        ("information unit interaction", res.InformationUnit_Interaction.is_fail()),
        ("no simultaneous encoding", res.NoSimultaneousEncoding.is_fail()),
    ];
    for (name, ok) in row {
        ensure!(ok, "{name} has the wrong verdict");
    }
    Ok("continuous reversibility Fail, tomographic locality Pass, interaction Fail, no simultaneous encoding Fail".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let bw = boxworld();
    let criteria: Vec<Criterion> = vec![
        ("vertex census", Box::new(census)),
        ("dimension", Box::new(|| dimension(&bw))),
        ("adjacency", Box::new(|| adjacency(&bw))),
        ("orbit separation", Box::new(|| orbit_separation(&bw))),
        ("gbit symmetry and continuity", Box::new(gbit_symmetry)),
        ("CHSH", Box::new(|| chsh(&bw))),
        ("no simultaneous encoding", Box::new(encoding)),
        ("tomographic locality", Box::new(tomographic_locality)),
        ("non-unique decomposition", Box::new(decomposition)),
        ("Bloch checks", Box::new(bloch)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("postulate report", Box::new(postulate_report)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
