//! Acceptance suite: one PASS/FAIL line per criterion, then a single assertion.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subregw::fields::OperatorExpr;
use subregw::fock::{Mode, Orientation};
use subregw::verify::{self, c2_reduce, C2Poly, CheckReport, CommCase};
use subregw::wgen;
use subregw::{Basis, Charge, Engine, FockMonomial, FockState, KMode, ScalarQ};

type Outcome = Result<String, String>;

fn sym(n: usize) -> Engine {
    Engine::new(n, KMode::Symbolic).unwrap()
}

fn crit(n: usize) -> Engine {
    Engine::new(n, KMode::at_int(0)).unwrap()
}

fn passed(r: &CheckReport) -> Result<(), String> {
    if r.passed {
        Ok(())
    } else {
        Err(format!("{} N={}: {:?}", r.check, r.params["N"], r.notes))
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let el = t.elapsed();
    if el <= limit {
        Ok(el)
    } else {
        Err(format!("{what} took {el:.1?}, limit {limit:?}"))
    }
}

fn screening_kernels() -> Outcome {
    let mut times = Vec::new();
    for (n, limit) in [(2, 10), (3, 10), (4, 600)] {
        let t = Instant::now();
        passed(&verify::check_kernel_suite(&sym(n)).map_err(|e| e.to_string())?)?;
        times.push(format!(
            "N={n} {:.1?}",
            within(t, Duration::from_secs(limit), &format!("N={n}"))?
        ));
    }
    Ok(times.join(", "))
}

/// `[e^b_{(m)}, F_j] = (m(K-1) + (μ_j, b)) e^b_{(m-1)}`, coefficient computed
/// from the Gram form.
fn oracle_coefficient(e: &Engine, b: Basis, j: usize, m: i64) -> ScalarQ {
    let mu = wgen::mu_vector(e, j).unwrap();
    let p = e.gram().pairing(&mu, &e.basis_vector(b)).unwrap();
    ScalarQ::linear(m, -m) + p
}

fn commutator_tables() -> Outcome {
    let e = sym(3);
    let n = 3;
    for m in -1..=1 {
        for i in 1..n {
            let a = Basis::A(i);
            let cases = [(CommCase::AEqual, i), (CommCase::ANext, i + 1)];
            for (case, j) in cases {
                if case.coefficient(m) != oracle_coefficient(&e, a, j, m) {
                    return Err(format!("{} coefficient at m={m}", case.label()));
                }
            }
            for j in (0..=n).filter(|&j| j != i && j != i + 1) {
                if CommCase::AOther.coefficient(m) != oracle_coefficient(&e, a, j, m) {
                    return Err(format!("A_{i}, j={j} coefficient at m={m}"));
                }
            }
        }
        let q = Basis::Q;
        let qcases = [
            (CommCase::QZero, 0),
            (CommCase::QOne, 1),
            (CommCase::QRest, 2),
            (CommCase::QRest, 3),
        ];
        for (case, j) in qcases {
            if case.coefficient(m) != oracle_coefficient(&e, q, j, m) {
                return Err(format!("{} coefficient at m={m}", case.label()));
            }
        }
    }
    let r = verify::check_comm_lemma(&e, 100, 2024).map_err(|e| e.to_string())?;
    passed(&r)?;
    Ok(format!(
        "6 cases x 100 states; {}",
        r.note_containing("Q,j=0").unwrap_or("")
    ))
}

fn hypergeometric() -> Outcome {
    let t = Instant::now();
    let r = verify::check_hypergeom_all(6);
    passed(&r)?;
    let el = within(t, Duration::from_secs(1), "hypergeometric identity")?;
    Ok(format!("{} cases in {el:.1?}", r.params["cases"]))
}

fn rearrangement() -> Outcome {
    for n in 2..=3 {
        passed(&verify::check_rearrangement(&sym(n)).map_err(|e| e.to_string())?)?;
    }
    let e = Engine::new(4, KMode::at_ratio(5, 7)).unwrap();
    passed(&verify::check_rearrangement(&e).map_err(|e| e.to_string())?)?;
    Ok("N=2,3 symbolic; N=4 at K=5/7".into())
}

fn conformal_vector() -> Outcome {
    let mut cs = Vec::new();
    for n in 2..=3 {
        let r = verify::check_omega(&sym(n)).map_err(|e| e.to_string())?;
        passed(&r)?;
        cs.push(format!(
            "N={n}: c = {}",
            r.params["c"].as_str().unwrap_or("?")
        ));
    }
    Ok(cs.join("; "))
}

/// `Σ_{i_1 < … < i_m} X_{i_m} ⋯ X_{i_1} v`, by direct expansion over subsets.
fn esym_by_subsets(e: &Engine, ops: &[OperatorExpr], m: usize, v: &FockState) -> FockState {
    let r = ops.len();
    let mut out = FockState::zero();
    for mask in 0u32..(1 << r) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let mut cur = v.clone();
        for (i, op) in ops.iter().enumerate() {
            if mask & (1 << i) != 0 {
                cur = e.apply_operator(op, &cur).unwrap();
            }
        }
        out.add_assign(&cur);
    }
    out
}

fn critical_level() -> Outcome {
    let t = Instant::now();
    for n in 2..=4 {
        let e = crit(n);
        let ops: Vec<OperatorExpr> = (1..=n)
            .map(|i| {
                OperatorExpr::Sum(vec![
                    OperatorExpr::Translation,
                    OperatorExpr::Heisenberg(wgen::mu_vector(&e, i).unwrap(), -1),
                ])
            })
            .collect();
        let w = wgen::build_w_all(&e).map_err(|e| e.to_string())?;
        for (m, wm) in w.iter().enumerate() {
            if *wm != esym_by_subsets(&e, &ops, m, &e.vacuum()) {
                return Err(format!("(a) N={n}: W{m} != e_{m}(d + mu)"));
            }
        }
        passed(&verify::check_centrality(&e).map_err(|e| e.to_string())?)?;
        passed(&verify::check_molev(&e).map_err(|e| e.to_string())?)?;
        passed(&verify::check_ef_ope(&e, 10, 11).map_err(|e| e.to_string())?)?;
    }
    let e = crit(2);
    let (ee, f, h) = (
        wgen::e_state(&e),
        wgen::f_state(&e).unwrap(),
        wgen::h_state(&e).unwrap(),
    );
    if e.nth_product(&ee, 1, &f).unwrap() != e.vacuum().scale(&ScalarQ::from_int(-2)) {
        return Err("N=2: E_(1)F != -2|0>".into());
    }
    if e.nth_product(&ee, 0, &f).unwrap() != h.scale(&ScalarQ::from_int(2)) {
        return Err("N=2: E_(0)F != 2H".into());
    }
    let el = within(t, Duration::from_secs(900), "critical level N=2..4")?;
    Ok(format!("(a)-(d) for N=2..4 in {el:.1?}"))
}

fn c2_layer() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=4 {
        let (r, pattern) =
            verify::check_c2_relations(n, 5, subregw::DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        passed(&r)?;
        notes.push(format!(
            "N={n} {{E,F}}bar: (k+1)-pattern {:?}, (N-k)-pattern {:?}",
            pattern.k_plus_one, pattern.n_minus_k
        ));
    }
    // N = 2: Ebar Fbar = -Hbar^2 - W2bar, assembled by hand.
    let e = crit(2);
    let ef = c2_reduce(
        &e.nth_product(&wgen::e_state(&e), -1, &wgen::f_state(&e).unwrap())
            .unwrap(),
    )
    .unwrap();
    let hbar = c2_reduce(&wgen::h_state(&e).unwrap()).unwrap();
    let w2bar = c2_reduce(&wgen::build_w(&e, 2).unwrap()).unwrap();
    let expected = hbar.mul(&hbar).add(&w2bar).scale(&-ScalarQ::one());
    if ef != expected {
        return Err(format!("N=2: Ebar Fbar = {ef}, expected {expected}"));
    }
    if c2_reduce(&FockState::from_weight(&e.basis_vector(Basis::Y))).unwrap() != C2Poly::zero(2) {
        return Err("Ybar != 0".into());
    }
    Ok(notes.join("; "))
}

fn fermionic() -> Outcome {
    let mut signs = Vec::new();
    for n in 2..=4 {
        let r = verify::check_fermionic(&crit(n)).map_err(|e| e.to_string())?;
        passed(&r)?;
        signs.push(format!("N={n} sign {:+}", r.sign.unwrap_or(0)));
    }
    Ok(signs.join(", "))
}

fn u_integrality() -> Outcome {
    for n in 2..=3 {
        passed(&verify::check_u_polynomial(&sym(n)).map_err(|e| e.to_string())?)?;
    }
    Ok("N=2,3".into())
}

fn random_weight_two(e: &Engine, seed: u64) -> FockState {
    let n = e.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = FockState::zero();
    for _ in 0..4 {
        let a = rng.gen_range(0..=n) as u16;
        let b = rng.gen_range(0..=n) as u16;
        let modes = if rng.gen_bool(0.3) {
            vec![Mode { sym: a, depth: 2 }]
        } else {
            vec![Mode { sym: a, depth: 1 }, Mode { sym: b, depth: 1 }]
        };
        let c = ScalarQ::from_int(rng.gen_range(1..=5));
        v.add_term(FockMonomial::new(Charge::zero(n), modes), c);
    }
    v
}

fn negative_controls() -> Outcome {
    let bad = Engine::with_orientation(2, KMode::Symbolic, Orientation::Reversed).unwrap();
    let r = verify::check_pairings(&bad).map_err(|e| e.to_string())?;
    if r.passed || r.witness.is_none() {
        return Err("gram-transpose passed validate_pairings".into());
    }
    let e = sym(3);
    let v = random_weight_two(&e, 99);
    if verify::homogeneous_weight(&e, &v) != Some(ScalarQ::from_int(2)) {
        return Err("random state is not of weight 2".into());
    }
    let r = verify::check_screening_kernel(&e, &v, "random").map_err(|e| e.to_string())?;
    match (&r.passed, &r.witness) {
        (false, Some(w)) if !w.is_zero() => {
            Ok("gram-transpose and random weight-2 state both rejected".into())
        }
        _ => Err("random weight-2 state passed the kernel check".into()),
    }
}

/// Written past the test harness's capture so the lines always reach the log.
fn line(s: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{s}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 screening kernels", screening_kernels),
        ("2 commutator tables", commutator_tables),
        ("3 hypergeometric identity", hypergeometric),
        ("4 rearrangement", rearrangement),
        ("5 conformal vector", conformal_vector),
        ("6 critical level", critical_level),
        ("7 C2 Poisson layer", c2_layer),
        ("8 fermionic realization", fermionic),
        ("9 U_m integrality", u_integrality),
        ("10 negative controls", negative_controls),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => line(&format!("PASS  {name}: {detail}")),
            Err(why) => {
                line(&format!("FAIL  {name}: {why}"));
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
