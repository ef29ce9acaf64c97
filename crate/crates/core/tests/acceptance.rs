//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so every line is printed even when a criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ncps_core::fock::ladder_interior_defect;
use ncps_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: [(usize, usize); 16] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            detail: String::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.failures.push(what());
        }
    }
}

fn params(theta: f64) -> PhaseSpaceParams {
    PhaseSpaceParams::new(1.0, theta).expect("valid parameters")
}

fn label((m, n): (usize, usize)) -> FockLabel {
    FockLabel::new(m, n)
}

/// Commutative distance along the first axis from the harmonic sum.
fn moyal_axis(m: usize, k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / ((m + i) as f64).sqrt()).sum::<f64>() / 2f64.sqrt()
}

fn closed_form_reproduction() -> Outcome {
    let mut out = Outcome::new();
    let p = params(0.0);
    let base = distance(&p, label((0, 0)), label((1, 0))).closed_form;
    out.check((base - 1.0 / 2f64.sqrt()).abs() <= 1e-12, || {
        format!("d(1,0;0,0) = {base}")
    });
    let mut worst = 0.0f64;
    for m in 0..=3 {
        for k in 0..=3 {
            for n in 0..=3 {
                let got = distance(&p, label((m + k, n)), label((m, n))).closed_form;
                let err = (got - moyal_axis(m, k)).abs();
                worst = worst.max(err);
                out.check(err <= 1e-12, || {
                    format!("m={m} k={k} n={n}: {got} vs {}", moyal_axis(m, k))
                });
            }
        }
    }
    out.detail = format!("worst error {worst:.2e}");
    out
}

fn shortening_factor() -> Outcome {
    let mut out = Outcome::new();
    let p0 = params(0.0);
    let mut worst = 0.0f64;
    for theta in [0.3, 0.6, 0.9] {
        let p = params(theta);
        let factor = (1.0 - theta * theta).sqrt();
        for &a in &SMALL {
            for &b in &SMALL {
                let d = distance(&p, label(a), label(b)).closed_form;
                let d0 = distance(&p0, label(a), label(b)).closed_form;
                let err = (d - d0 * factor).abs();
                worst = worst.max(err);
                out.check(err <= 1e-12, || {
                    format!("theta={theta} {a:?}->{b:?}: {d} vs {}", d0 * factor)
                });
            }
        }
    }
    out.detail = format!("worst error {worst:.2e}");
    out
}

fn oracle_sandwich() -> Outcome {
    let mut out = Outcome::new();
    let cfg = SupSolverConfig::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for theta in [0.0, 0.6] {
        let p = params(theta);
        for &b in &SMALL {
            let closed = distance(&p, label((0, 0)), label(b)).closed_form;
            match sup_distance(&p, label((0, 0)), label(b), &cfg) {
                Ok(r) => {
                    let err = (r.value - closed).abs();
                    worst = worst.max(err);
                    out.check(err <= 1e-4 && r.converged, || {
                        format!(
                            "theta={theta} (0,0)->{b:?}: numeric {:.9} closed form {closed:.9} diff {:.3e}",
                            r.value,
                            r.value - closed
                        )
                    });
                }
                Err(e) => out.check(false, || format!("theta={theta} (0,0)->{b:?}: {e}")),
            }
        }
    }
    out.detail = format!("worst |diff| {worst:.3e}, {:.1?}", start.elapsed());
    out
}

fn ball_saturation() -> Outcome {
    let mut out = Outcome::new();
    let trunc = Truncation::new(24, 8).expect("valid truncation");
    let mut count = 0;
    for theta in [0.0, 0.3, 0.6, 0.9] {
        let p = params(theta);
        let mut elements = Vec::new();
        for m in 0..=3 {
            for k in 1..=3 {
                let e = optimal_element_axis(&p, m, k, 0, trunc).expect("axis element");
                elements.push((format!("axis m={m} k={k}"), e));
            }
        }
        for &b in &SMALL[1..] {
            let e = optimal_element_general(&p, label((0, 0)), label(b), trunc).expect("general element");
            elements.push((format!("(0,0)->{b:?}"), e));
        }
        for (name, e) in elements {
            count += 1;
            let norm = diagonal_commutator_norm(&e, &p, trunc.cutoff).expect("norm");
            let report = constraint_relations(&e, &p);
            out.check((norm - 1.0).abs() <= 1e-6, || {
                format!("theta={theta} {name}: norm {norm:.9}")
            });
            out.check(report.max_residual.abs() <= 1e-9, || {
                format!(
                    "theta={theta} {name}: max relation residual {:.3e}",
                    report.max_residual
                )
            });
        }
    }
    out.detail = format!("{count} elements");
    out
}

fn identity_suite() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    for theta in [0.0, 0.3, 0.6, 0.9] {
        let p = params(theta);
        for m in 0..=6 {
            for n in 0..=6 {
                for k in 0..=6 {
                    for l in 0..=6 {
                        let add = check_additivity(&p, m, n, k, l);
                        let pyth = check_pythagoras(&p, m, n, k, l);
                        worst = worst.max(add).max(pyth);
                        out.check(add < 1e-12 && pyth < 1e-12, || {
                            format!("theta={theta} ({m},{n},{k},{l}): additivity {add:.2e} pythagoras {pyth:.2e}")
                        });
                    }
                }
            }
        }
    }
    out.detail = format!("worst residual {worst:.2e}");
    out
}

fn algebra_suite() -> Outcome {
    let mut out = Outcome::new();
    let gammas = gamma_matrices();
    let anti = gammas.anticommutator_defect();
    out.check(anti == 0.0, || format!("gamma anticommutator defect {anti:e}"));

    let n = 24;
    let ladder = ladder_interior_defect(n).expect("ladder defect");
    out.check(ladder <= 1e-12, || format!("interior ladder defect {ladder:e}"));

    let mut worst_herm = 0.0f64;
    let mut worst_gh = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theta in [0.0, 0.6] {
        let p = params(theta);
        let d = dirac_operator(&p, n).expect("dirac operator");
        worst_herm = worst_herm.max(d.hermiticity_defect());

        let e = DiagonalElement::from_fn(n, n, Extension::Fill(0.0), |_, _| rng.random_range(-1.0..1.0))
            .expect("random element");
        let comm = dirac_commutator(&d, &e.to_operator(n).expect("operator")).expect("commutator");
        let [u_rows, u_cols, v_rows, v_cols] = comm.gram_diagonals();
        let t2 = p.t() * p.t();
        let c = |i: usize, j: usize| e.coeff(i, j);
        let g = |i: usize, j: usize| {
            if i == 0 {
                0.0
            } else {
                i as f64 * (c(i, j) - c(i - 1, j)).powi(2)
            }
        };
        let h = |i: usize, j: usize| {
            if j == 0 {
                0.0
            } else {
                j as f64 * (c(i, j) - c(i, j - 1)).powi(2)
            }
        };
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let k = FockLabel::new(i, j).index(n);
                let expected = [
                    g(i + 1, j) + t2 * h(i, j + 1),
                    g(i, j) + t2 * h(i, j),
                    h(i, j + 1) + t2 * g(i + 1, j),
                    h(i, j) + t2 * g(i, j),
                ];
                let got = [u_rows[k], u_cols[k], v_rows[k], v_cols[k]];
                for (x, y) in got.iter().zip(expected) {
                    worst_gh = worst_gh.max((x - y).abs());
                }
            }
        }
    }
    out.check(worst_herm <= 1e-12, || {
        format!("Dirac hermiticity defect {worst_herm:e}")
    });
    out.check(worst_gh <= 1e-10, || format!("G/H diagonal mismatch {worst_gh:e}"));
    out.detail = format!("hermiticity {worst_herm:.1e}, ladder {ladder:.1e}, G/H {worst_gh:.1e}");
    out
}

fn degeneracy_and_errors() -> Outcome {
    let mut out = Outcome::new();
    for theta in [1.0, 1.5] {
        let r = PhaseSpaceParams::new(1.0, theta);
        out.check(matches!(r, Err(Error::SingularRegime { .. })), || {
            format!("theta={theta}: {r:?}")
        });
    }
    let p = params(0.6);
    for &a in &SMALL {
        let closed = distance(&p, label(a), label(a)).closed_form;
        out.check(closed == 0.0, || format!("closed form d({a:?},{a:?}) = {closed}"));
    }
    match sup_distance(&p, label((2, 1)), label((2, 1)), &SupSolverConfig::default()) {
        Ok(r) => out.check(r.value == 0.0, || format!("numeric d(a,a) = {}", r.value)),
        Err(e) => out.check(false, || format!("numeric d(a,a): {e}")),
    }
    let constant = DiagonalElement::from_fn(6, 6, Extension::Clamp, |_, _| 2.5).expect("constant");
    let n = 8;
    let d = dirac_operator(&p, n).expect("dirac operator");
    let dense = dirac_commutator(&d, &TruncatedOperator::identity(n).scale(2.5.into()))
        .and_then(|c| c.norm())
        .expect("dense norm");
    out.check(dense == 0.0, || format!("dense commutator of a constant: {dense:e}"));
    let sector = diagonal_commutator_norm(&constant, &p, n).expect("sector norm");
    out.check(sector == 0.0, || format!("sector commutator of a constant: {sector:e}"));
    let scaled = scale_to_ball(&constant, &p, n);
    out.check(matches!(scaled, Err(Error::ZeroElement)), || {
        format!("scale_to_ball: {scaled:?}")
    });
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("closed-form reproduction", closed_form_reproduction),
        ("shortening factor", shortening_factor),
        ("oracle sandwich", oracle_sandwich),
        ("ball saturation", ball_saturation),
        ("identity suite", identity_suite),
        ("algebra suite", algebra_suite),
        ("degeneracy and errors", degeneracy_and_errors),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {status} ({})", i + 1, out.detail);
        for f in &out.failures {
            println!("    {f}");
        }
        if !out.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
