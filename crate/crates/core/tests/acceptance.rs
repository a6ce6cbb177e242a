//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use meq::dynamics::evolve_trajectory;
use meq::hilbert::{flat_to_index, index_to_flat, partial_trace, partial_transpose, tensor_all, MultiIndex, Operator};
use meq::linalg::Matrix;
use meq::measures::{displaced_mode_population, log_negativity, partial_transpose_spectrum, PopulationReport};
use meq::modelspec::{
    build_model, cascade_document, cascade_model, parse_expr, parse_model, render_cascade, CascadeOperators,
    CascadeParams, ParseErrorKind,
};
use meq::steady::{
    check_uniqueness, steady_dense_with_spectrum, steady_linsolve, steady_sparse, SteadyStateResult, DEFAULT_GAP_TOL,
};
use meq::superspace::build_liouvillian;
use meq::{c64, SpaceLayout};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const POPULATIONS: [f64; 5] = [0.45882, 0.48438, 0.056796, 0.019165, 0.0012705];

/// Cascade steady states by all three methods, with the top of the dense spectrum.
struct Cascade {
    params: CascadeParams,
    dense: SteadyStateResult,
    sparse: SteadyStateResult,
    solve: SteadyStateResult,
    top: Vec<c64>,
    seconds: [f64; 3],
}

fn solve_cascade() -> Result<Cascade, String> {
    let params = CascadeParams::default();
    let l = build_liouvillian(&cascade_model(&params).map_err(fail)?).map_err(fail)?;
    let t = Instant::now();
    let sparse = steady_sparse(&l).map_err(fail)?;
    let t_sparse = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let solve = steady_linsolve(&l, 1, 1.0).map_err(fail)?;
    let t_solve = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let (dense, spec) = steady_dense_with_spectrum(&l, 5).map_err(fail)?;
    let t_dense = t.elapsed().as_secs_f64();
    Ok(Cascade { params, dense, sparse, solve, top: spec.eigenvalues, seconds: [t_dense, t_sparse, t_solve] })
}

fn populations(c: &Cascade, rho: &Operator) -> Result<Vec<f64>, String> {
    let ops = CascadeOperators::new(&c.params).map_err(fail)?;
    let obs = ops.population_observables().map_err(fail)?;
    Ok(PopulationReport::new(rho, &obs).map_err(fail)?.values)
}

fn criterion_1(c: &Cascade) -> Outcome {
    let mut worst = 0.0f64;
    for r in [&c.dense, &c.sparse, &c.solve] {
        for (got, want) in populations(c, &r.rho)?.iter().zip(POPULATIONS) {
            worst = worst.max((got - want).abs());
        }
    }
    let [dense, sparse, solve] = c.seconds;
    let detail = format!("max |dev| {worst:.2e}; dense {dense:.1}s, sparse {sparse:.2}s, solve {solve:.2}s");
    ensure(worst < 1e-4 && sparse < 10.0 && solve < 10.0 && dense < 120.0, detail)
}

fn criterion_2(c: &Cascade) -> Outcome {
    let reals = [0.0, -1.0631, -1.5594, -1.5594, -1.5596];
    let imags = [0.0, 0.0, 20.62, 20.62, 20.617];
    let mut worst = 0.0f64;
    for ((v, re), im) in c.top.iter().zip(reals).zip(imags) {
        worst = worst.max((v.re - re).abs()).max((v.im.abs() - im).abs());
    }
    let lead = c.top[0].norm();
    let conjugate = c.top[2].im * c.top[3].im < 0.0;
    let shown: Vec<String> = c.top.iter().map(|v| format!("{:.4}{:+.4}i", v.re, v.im)).collect();
    ensure(
        c.top.len() == 5 && worst < 5e-3 && lead < 1e-10 && conjugate,
        format!("[{}]; max |dev| {worst:.1e}; |l0| {lead:.1e}", shown.join(", ")),
    )
}

fn criterion_3(c: &Cascade) -> Outcome {
    let ops = CascadeOperators::new(&c.params).map_err(fail)?;
    let popa = displaced_mode_population(&c.sparse.rho, &ops.a, c.params.alpha().map_err(fail)?).map_err(fail)?;
    let popb = displaced_mode_population(&c.sparse.rho, &ops.b, c.params.beta().map_err(fail)?).map_err(fail)?;
    let (ra, rb) = ((popa / 399.66 - 1.0).abs(), (popb / 24.961 - 1.0).abs());
    ensure(ra < 1e-3 && rb < 1e-3, format!("popa {popa:.4} (rel {ra:.1e}), popb {popb:.4} (rel {rb:.1e})"))
}

fn three_significant(x: f64) -> String {
    format!("{x:.2e}")
}

fn criterion_4(c: &Cascade) -> Outcome {
    let rho = &c.sparse.rho;
    let reduced = |keep: &[&str]| -> Result<Operator, String> {
        let traced: Vec<&str> = ["xi", "a", "b"].into_iter().filter(|n| !keep.contains(n)).collect();
        partial_trace(rho, &traced).map_err(fail)
    };
    let xi_ab = log_negativity(rho, &["xi"]).map_err(fail)?;
    let a_b = log_negativity(&reduced(&["a", "b"])?, &["a"]).map_err(fail)?;
    let xi_a = log_negativity(&reduced(&["xi", "a"])?, &["xi"]).map_err(fail)?;
    let xi_b = log_negativity(&reduced(&["xi", "b"])?, &["xi"]).map_err(fail)?;
    let sig = [(xi_ab, 0.0025892), (xi_a, 0.0017957), (xi_b, 9.2002e-05)];
    let ok_sig = sig.iter().all(|&(got, want)| three_significant(got) == three_significant(want));
    let rel = (a_b / 2.027e-07 - 1.0).abs();
    ensure(
        ok_sig && rel < 0.1,
        format!("xi|ab {xi_ab:.5e}, a|b {a_b:.4e} (rel {rel:.1e}), xi|a {xi_a:.5e}, xi|b {xi_b:.5e}"),
    )
}

fn criterion_5(c: &Cascade) -> Outcome {
    let dev = |x: &SteadyStateResult, y: &SteadyStateResult| x.rho.max_abs_diff(&y.rho).unwrap_or(f64::INFINITY);
    let cascade = dev(&c.dense, &c.sparse).max(dev(&c.dense, &c.solve)).max(dev(&c.sparse, &c.solve));
    let mut worst = 0.0f64;
    let mut models = 0;
    let mut seed = 0u64;
    while models < 20 {
        let d = 2 + (seed as usize % 11);
        let l = build_liouvillian(&random_model(50_000 + seed, d)).map_err(fail)?;
        seed += 1;
        if !check_uniqueness(&l, DEFAULT_GAP_TOL).map_err(fail)?.unique {
            continue;
        }
        let (dense, _) = steady_dense_with_spectrum(&l, 1).map_err(fail)?;
        let sparse = steady_sparse(&l).map_err(fail)?;
        let solve = steady_linsolve(&l, 1, 1.0).map_err(fail)?;
        worst = worst.max(dev(&dense, &sparse)).max(dev(&dense, &solve));
        models += 1;
    }
    ensure(cascade < 1e-8 && worst < 1e-8, format!("cascade {cascade:.1e}; {models} random models {worst:.1e}"))
}

/// The shared corpus: 50 random models, d in {2, 3, 4, 6}, 1..=3 dissipators.
fn corpus() -> Vec<meq::LindbladModel> {
    (0..50u64).map(|seed| random_model(60_000 + seed, [2, 3, 4, 6][seed as usize % 4])).collect()
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for model in corpus() {
        let l = build_liouvillian(&model).map_err(fail)?;
        let oracle = oracle_liouvillian(&model);
        for (i, row) in oracle.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((l.matrix().get(i, j) - v).norm());
            }
        }
    }
    ensure(worst < 1e-12, format!("50 models, max |dev| {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let (mut structural, mut drift) = (0.0f64, 0.0f64);
    for (k, model) in corpus().into_iter().enumerate() {
        let d = model.dim();
        let l = build_liouvillian(&model).map_err(fail)?;
        for col in 0..d * d {
            let s: c64 = (0..d).map(|n| l.matrix().get(n + n * d, col)).sum();
            structural = structural.max(s.norm());
        }
        let gamma_min = model.dissipators().iter().map(|(g, _)| *g).fold(f64::INFINITY, f64::min);
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5 / gamma_min).collect();
        let rho0 = to_op(model.layout(), &density(&mut rng(k as u64), d));
        let traj = evolve_trajectory(&l, &rho0, &times).map_err(fail)?;
        for rho in &traj.states {
            drift = drift.max((rho.trace() - cx(1.0, 0.0)).norm());
        }
    }
    ensure(structural < 1e-12 && drift < 1e-10, format!("vec(I)^T L {structural:.1e}; trace drift {drift:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for (omega, gamma) in [(1.0, 1.0), (2.0, 1.0), (0.5, 3.0)] {
        let model = driven_qubit(omega, gamma);
        let bloch = omega * omega / (gamma * gamma + 2.0 * omega * omega);
        let null = null_vector(&oracle_liouvillian(&model));
        let oracle = (null[3] / (null[0] + null[3])).re;
        worst = worst.max((oracle - bloch).abs());
        let l = build_liouvillian(&model).map_err(fail)?;
        let (dense, _) = steady_dense_with_spectrum(&l, 1).map_err(fail)?;
        for r in [dense, steady_sparse(&l).map_err(fail)?, steady_linsolve(&l, 1, 1.0).map_err(fail)?] {
            worst = worst.max((r.rho.get(1, 1).re - bloch).abs());
        }
    }
    ensure(worst < 1e-10, format!("3 parameter sets, max |dev| {worst:.1e}"))
}

fn dense_matrix(m: &Dense) -> Matrix {
    Matrix::from_rows(m).unwrap()
}

fn criterion_9() -> Outcome {
    let mut layouts = 0;
    for d1 in 1..=10usize {
        for d2 in 1..=100 / d1 {
            for d3 in [1, 2, 3].into_iter().filter(|d3| d1 * d2 * d3 <= 100) {
                let layout = SpaceLayout::new([("x", d1), ("y", d2), ("z", d3)]).map_err(fail)?;
                for flat in 1..=layout.total_dim() {
                    let multi = flat_to_index(&layout, flat).map_err(fail)?;
                    if index_to_flat(&layout, &multi).map_err(fail)? != flat {
                        return Err(format!("index map not bijective on {layout}"));
                    }
                }
                if index_to_flat(&layout, &MultiIndex::new(vec![d1 + 1, 1, 1])).is_ok() {
                    return Err(format!("out-of-range index accepted on {layout}"));
                }
                layouts += 1;
            }
        }
    }
    let mut g = rng(7);
    let mut worst = 0.0f64;
    for (d1, d2) in [(2, 3), (3, 2), (4, 4)] {
        let layout = SpaceLayout::new([("x", d1), ("y", d2)]).map_err(fail)?;
        let (a, b) = (random_dense(&mut g, d1), random_dense(&mut g, d2));
        let ab = tensor_all(&layout, &[dense_matrix(&a), dense_matrix(&b)]).map_err(fail)?;
        let left = partial_trace(&ab, &["y"]).map_err(fail)?;
        let expected = scale(&a, trace(&b));
        worst = worst.max(max_diff(&to_dense(&left), &expected));
        let x = to_op(&layout, &random_dense(&mut g, d1 * d2));
        worst = worst.max((partial_trace(&x, &["x"]).map_err(fail)?.trace() - x.trace()).norm());
        let twice = partial_transpose(&partial_transpose(&x, &["y"]).map_err(fail)?, &["y"]).map_err(fail)?;
        worst = worst.max(twice.max_abs_diff(&x).map_err(fail)?);
    }
    let pair = SpaceLayout::new([("x", 2), ("y", 2)]).map_err(fail)?;
    let h = cx(0.5, 0.0);
    let z = cx(0.0, 0.0);
    let bell = to_op(&pair, &vec![vec![h, z, z, h], vec![z; 4], vec![z; 4], vec![h, z, z, h]]);
    let spectrum = partial_transpose_spectrum(&bell, &["x"]).map_err(fail)?;
    for (got, want) in spectrum.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        worst = worst.max((got - want).abs());
    }
    ensure(worst < 1e-12, format!("{layouts} layouts bijective; identities max |dev| {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let params = CascadeParams::default();
    let text = render_cascade(&params).map_err(fail)?;
    let parsed = parse_model(&text).map_err(fail)?;
    let canonical = cascade_document(&params).map_err(fail)?;
    let same_doc = parsed.to_string() == canonical.to_string()
        && parsed.hamiltonian == canonical.hamiltonian
        && parse_model(&parsed.to_string()).map_err(fail)?.to_string() == parsed.to_string();
    let built = build_model(&parsed).map_err(fail)?;
    let direct = cascade_model(&params).map_err(fail)?;
    let mut worst = built.hamiltonian().max_abs_diff(direct.hamiltonian()).map_err(fail)?;
    for ((ga, ja), (gb, jb)) in built.dissipators().iter().zip(direct.dissipators()) {
        if ga != gb {
            return Err(format!("rate {ga} vs {gb}"));
        }
        worst = worst.max(ja.max_abs_diff(jb).map_err(fail)?);
    }
    let cases = [
        ("spaces:\n  q = 2\nhamiltonian:\n  2 # ok\n  3 $ proj(q,1)\n", ParseErrorKind::Lexical, (5, 5)),
        ("spaces:\n  q = 2\nhamiltonian:\n  2*(proj(q,1)\n", ParseErrorKind::Syntax, (4, 15)),
        ("spaces:\n  q = 2\ndissipators:\n  1, trans(q,1,3)\n", ParseErrorKind::Semantic, (4, 6)),
    ];
    let mut positioned = Vec::new();
    for (src, kind, pos) in cases {
        match parse_model(src) {
            Err(e) if e.kind == kind && (e.line, e.col) == pos => {
                positioned.push(format!("{kind} {}:{}", e.line, e.col))
            }
            Err(e) => return Err(format!("expected {kind} at {pos:?}, got {e}")),
            Ok(_) => return Err(format!("expected {kind} error")),
        }
    }
    let unbalanced = parse_expr("ga*(a'*s12 + a*s12'").err().map(|e| (e.kind, e.col));
    ensure(
        same_doc && worst <= 1e-14 && unbalanced == Some((ParseErrorKind::Syntax, 20)),
        format!("round trip {same_doc}; build max |dev| {worst:.1e}; {}", positioned.join(", ")),
    )
}

fn main() -> ExitCode {
    let cascade = solve_cascade();
    let on_cascade = |f: fn(&Cascade) -> Outcome| match &cascade {
        Ok(c) => f(c),
        Err(e) => Err(format!("cascade solve failed: {e}")),
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("cascade populations, all methods", on_cascade(criterion_1)),
        ("cascade Liouvillian spectrum", on_cascade(criterion_2)),
        ("displaced cavity populations", on_cascade(criterion_3)),
        ("logarithmic negativities", on_cascade(criterion_4)),
        ("cross-method consistency", on_cascade(criterion_5)),
        ("Liouvillian oracle equivalence", criterion_6()),
        ("trace preservation", criterion_7()),
        ("driven qubit analytic steady state", criterion_8()),
        ("composite-space identities", criterion_9()),
        ("model file parser", criterion_10()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
