use hardy::dirichlet::{
    derivative_area_norm, dirichlet_norm, kernel_test_lower_bound, tree_carleson_constant, DyadicTree, TreeMeasure,
};
use hardy::inner_outer::factorize_rational;
use hardy::model_matching::{model_match, verify_match, MatchProblem};
use hardy::operators::{
    best_causal_approx, nehari_distance, toeplitz_apply, toeplitz_norm_lower, von_neumann_check, ContractionMatrix,
    LaurentCoefficients,
};
use hardy::pick::{is_feasible, minimal_radius, solve_pick, PickProblem, DEFAULT_FEASIBILITY_TOL};
use hardy::rational::{feedback_closure, Polynomial, RationalFunction};
use hardy::sampling::{reconstruct_certified, SampleSet};
use hardy::signal::{convolve, linf_extremal_witness, stability_report, Signal};
use hardy::spectrum::{convolution_theorem_check, fourier_grid, refine_sup, sup_norm_grid, DEFAULT_SUP_TOL};
use hardy::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{cx, cxs, read_json, to_value, CliError, Report};
use crate::{Command, DyadicCommand, Global, SampleCommand};

type Outcome = Result<(), CliError>;

/// Symbols come either as Laurent coefficient maps or as signals.
#[derive(Deserialize)]
#[serde(untagged)]
enum SymbolInput {
    Laurent(LaurentCoefficients),
    Signal(Signal),
}

fn read_symbol(path: &std::path::Path) -> Result<(Signal, Value), CliError> {
    let (input, raw) = read_json::<SymbolInput>(path)?;
    let signal = match input {
        SymbolInput::Laurent(l) => l.to_signal()?,
        SymbolInput::Signal(s) => s,
    };
    Ok((signal, raw))
}

pub fn run(command: &Command, global: &Global, r: &mut Report) -> Outcome {
    match command {
        Command::Conv { phi, psi } => {
            let (phi, raw_phi) = read_json::<Signal>(phi)?;
            let (psi, raw_psi) = read_json::<Signal>(psi)?;
            r.input("phi", raw_phi).input("psi", raw_psi);
            conv(&phi, &psi, global, r)
        }
        Command::Stability { k } => {
            let (k, raw) = read_json::<Signal>(k)?;
            r.input("k", raw);
            stability(&k, global, r)
        }
        Command::Spectrum { phi } => {
            let (phi, raw) = read_json::<Signal>(phi)?;
            r.input("phi", raw);
            spectrum(&phi, global, r)
        }
        Command::Classify { b } => {
            let (b, raw) = read_json::<RationalFunction>(b)?;
            r.input("b", raw);
            let report = b.classify();
            r.output("display", b.to_string())
                .output("zeros", cxs(&report.zeros))
                .output("poles", cxs(&report.poles))
                .output("class", to_value(&report.class))
                .flag("causal_stable", report.causal_stable);
            Ok(())
        }
        Command::Factor { b } => {
            let (b, raw) = read_json::<RationalFunction>(b)?;
            r.input("b", raw);
            let io = factorize_rational(&b)?;
            r.output("inner", io.inner.blaschke_rational().to_string())
                .output("outer", io.outer.to_string())
                .output("inner_function", to_value(&io.inner))
                .output("outer_function", to_value(&io.outer));
            Ok(())
        }
        Command::Nehari { symbol, n } => {
            let (phi, raw) = read_symbol(symbol)?;
            r.input("symbol", raw).input("n", *n);
            let h = nehari_distance(&phi, *n);
            r.output("distance", h.sigma)
                .output("sigma2", h.sigma2)
                .output("truncation", h.n)
                .output("schmidt_u", cxs(&h.pair.u))
                .output("schmidt_v", cxs(&h.pair.v))
                .flag("converged", h.converged);
            Ok(())
        }
        Command::Aak { symbol } => {
            let (phi, raw) = read_symbol(symbol)?;
            let n = global.grid.unwrap_or(2048);
            r.input("symbol", raw).input("grid", n);
            let a = best_causal_approx(&phi, n)?;
            r.output("b", to_value(&a.b))
                .output("sigma", a.sigma)
                .output("achieved", a.achieved)
                .output("modulus_deviation", a.modulus_deviation)
                .output("negative_leak", a.negative_leak)
                .flag("unique", true);
            Ok(())
        }
        Command::Toeplitz { symbol, f, radii, angles } => {
            let (psi, raw) = read_symbol(symbol)?;
            let n = global.grid.unwrap_or(1024);
            r.input("symbol", raw).input("grid", n).input("radii", json!(radii)).input("angles", *angles);
            let grid = fourier_grid(&psi, n)?;
            let bracket = toeplitz_norm_lower(&grid, radii, *angles)?;
            r.output("lower", bracket.lower).output("upper", bracket.upper).output("argmax", cx(bracket.argmax));
            if let Some(path) = f {
                let (f, raw_f) = read_json::<Signal>(path)?;
                r.input("f", raw_f);
                r.output("applied", to_value(&toeplitz_apply(&grid, &f)?));
            }
            Ok(())
        }
        Command::VnCheck { matrix, shift, poly, trials, max_dim, max_degree } => {
            vn_check(matrix.as_deref(), *shift, poly.as_deref(), (*trials, *max_dim, *max_degree), global, r)
        }
        Command::Pick { problem } => {
            let (p, raw) = read_json::<PickProblem>(problem)?;
            r.input("problem", raw);
            pick(&p, global, r)
        }
        Command::Match { problem } => {
            let (p, raw) = read_json::<MatchProblem>(problem)?;
            r.input("problem", raw);
            model_matching(&p, global, r)
        }
        Command::Feedback { plant, controller, strict } => {
            let (p, raw_p) = read_json::<RationalFunction>(plant)?;
            let (c, raw_c) = read_json::<RationalFunction>(controller)?;
            r.input("plant", raw_p).input("controller", raw_c).input("strict", *strict);
            let closed = feedback_closure(&p, &c, *strict)?;
            let report = closed.classify();
            r.output("closed_loop", to_value(&closed))
                .output("display", closed.to_string())
                .output("poles", cxs(&report.poles))
                .output("class", to_value(&report.class))
                .flag("causal_stable", report.causal_stable);
            Ok(())
        }
        Command::Sample(SampleCommand::Reconstruct { samples, times, tail_energy }) => {
            let (s, raw) = read_json::<SampleSet>(samples)?;
            r.input("samples", raw).input("t", json!(times)).input("tail_energy", *tail_energy);
            let values: Vec<_> = times
                .iter()
                .map(|&t| {
                    let rec = reconstruct_certified(&s, t, *tail_energy);
                    json!({ "t": t, "value": cx(rec.value), "tail_bound": rec.tail_bound })
                })
                .collect();
            r.output("reconstruction", values);
            Ok(())
        }
        Command::Dyadic(DyadicCommand::Carleson { measure }) => {
            let (mu, raw) = read_json::<TreeMeasure>(measure)?;
            r.input("measure", raw);
            let constant = tree_carleson_constant(&mu)?;
            let (bound, vertex) = kernel_test_lower_bound(&mu);
            r.output("depth", mu.depth())
                .output("constant", constant)
                .output("kernel_lower_bound", bound)
                .output("kernel_argmax", DyadicTree::label(vertex))
                .flag("converged", true);
            Ok(())
        }
        Command::Dirichlet { coeffs, alpha } => {
            let (a, raw) = read_json::<Polynomial>(coeffs)?;
            r.input("coeffs", raw).input("alpha", *alpha);
            r.output("norm", dirichlet_norm(a.coeffs(), *alpha));
            if (0.0..=1.0).contains(alpha) {
                r.output("area_norm", derivative_area_norm(a.coeffs(), *alpha)?).flag("area_converged", true);
            }
            Ok(())
        }
    }
}

/// Smallest admissible grid holding the support of every signal.
fn covering_grid(signals: &[&Signal]) -> usize {
    let reach = signals
        .iter()
        .filter_map(|s| s.support())
        .map(|(first, last)| first.unsigned_abs().max(last.unsigned_abs() + 1))
        .max()
        .unwrap_or(0);
    ((2 * reach) as usize).next_power_of_two().max(8)
}

fn conv(phi: &Signal, psi: &Signal, global: &Global, r: &mut Report) -> Outcome {
    let out = convolve(phi, psi);
    let n = global.grid.unwrap_or_else(|| covering_grid(&[phi, psi, &out]));
    r.output("result", to_value(&out)).output("grid", n);
    r.output("convolution_theorem_deviation", convolution_theorem_check(phi, psi, n)?);
    Ok(())
}

fn boundary_sup(s: &Signal, tol: f64) -> hardy::Result<hardy::spectrum::SupEstimate> {
    refine_sup(|t| s.iter().map(|(n, v)| v * Complex64::from_polar(1.0, n as f64 * t)).sum(), tol)
}

fn stability(k: &Signal, global: &Global, r: &mut Report) -> Outcome {
    let tol = global.tol.unwrap_or(DEFAULT_SUP_TOL);
    r.tolerance("sup_tol", tol);
    let report = stability_report(k);
    let witness = linf_extremal_witness(k)?;
    let sup = boundary_sup(k, tol)?;
    r.output("l1_norm", report.l1_norm)
        .output("linf_gain", report.linf_gain)
        .output("l2_gain_upper", report.l2_gain_upper)
        .output("l2_gain", sup.value)
        .output("witness", to_value(&witness))
        .output("witness_response", cx(convolve(k, &witness).get(0)))
        .flag("l2_gain_exact", report.l2_gain_exact_when_nonneg);
    Ok(())
}

fn spectrum(phi: &Signal, global: &Global, r: &mut Report) -> Outcome {
    let n = global.grid.unwrap_or(256);
    let tol = global.tol.unwrap_or(DEFAULT_SUP_TOL);
    r.input("grid", n).tolerance("sup_tol", tol);
    let grid = fourier_grid(phi, n)?;
    let values = grid.values();
    r.output("re", values.iter().map(|v| v.re).collect::<Vec<_>>())
        .output("im", values.iter().map(|v| v.im).collect::<Vec<_>>())
        .output("sup_norm_grid", sup_norm_grid(&grid));
    if !phi.is_zero() {
        let sup = boundary_sup(phi, tol)?;
        r.output("sup_norm", sup.value).output("argmax", sup.argmax).output("sup_grid_size", sup.n);
    }
    Ok(())
}

fn vn_check(
    matrix: Option<&std::path::Path>,
    shift: Option<usize>,
    poly: Option<&std::path::Path>,
    (trials, max_dim, max_degree): (usize, usize, usize),
    global: &Global,
    r: &mut Report,
) -> Outcome {
    r.tolerance("violation_slack", 1e-9);
    let single = match (matrix, shift) {
        (Some(path), _) => {
            let (t, raw) = read_json::<ContractionMatrix>(path)?;
            r.input("matrix", raw);
            Some(t)
        }
        (None, Some(n)) => {
            r.input("shift", n);
            Some(ContractionMatrix::truncated_shift(n))
        }
        (None, None) => None,
    };
    if let Some(t) = single {
        let path = poly.ok_or_else(|| CliError::Usage("--poly is required with --matrix or --shift".into()))?;
        let (p, raw) = read_json::<Polynomial>(path)?;
        r.input("poly", raw);
        let check = von_neumann_check(&p, &t)?;
        r.output("lhs", check.lhs).output("rhs", check.rhs).output("gap", check.rhs - check.lhs);
        r.flag("holds", check.holds);
        return Ok(());
    }
    if max_dim == 0 {
        return Err(CliError::Usage("--max-dim must be at least 1".into()));
    }
    r.input("seed", global.seed).input("trials", trials).input("max_dim", max_dim).input("max_degree", max_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
    let mut violations = 0;
    let mut worst = json!(null);
    let mut worst_margin = f64::NEG_INFINITY;
    for trial in 0..trials {
        let dim = rng.gen_range(1..=max_dim);
        let t = ContractionMatrix::random(dim, &mut rng);
        let degree = rng.gen_range(0..=max_degree);
        let p = Polynomial::new(
            (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        );
        let check = von_neumann_check(&p, &t)?;
        if !check.holds {
            violations += 1;
        }
        let margin = check.lhs - check.rhs;
        if margin > worst_margin {
            worst_margin = margin;
            worst = json!({ "trial": trial, "dim": dim, "degree": degree, "lhs": check.lhs, "rhs": check.rhs });
        }
    }
    r.output("violations", violations).output("worst", worst);
    r.flag("holds", violations == 0);
    Ok(())
}

fn pick(p: &PickProblem, global: &Global, r: &mut Report) -> Outcome {
    let tol = global.tol.unwrap_or(DEFAULT_FEASIBILITY_TOL);
    r.tolerance("feasibility_tol", tol).tolerance("radius_tol", 1e-10);
    let feas = is_feasible(p, tol);
    r.output("radius", p.radius()).output("feasible", feas.feasible).output("min_eig", feas.min_eig);
    if !p.nodes().is_empty() {
        r.output("minimal_radius", minimal_radius(p.nodes(), p.targets(), 1e-10)?);
    }
    if !feas.feasible {
        return Err(hardy::Error::Infeasible.into());
    }
    let h = solve_pick(p)?;
    let residual = p.nodes().iter().zip(p.targets()).map(|(l, m)| (h.eval(*l) - m).norm()).fold(0.0, f64::max);
    let sup = refine_sup(|t| h.eval(Complex64::from_polar(1.0, t)), global.tol.unwrap_or(DEFAULT_SUP_TOL))?;
    r.output("H", h.to_string())
        .output("h", to_value(&h))
        .output("residual", residual)
        .output("sup_norm", sup.value);
    r.flag("within_radius", sup.value <= p.radius() * (1.0 + 1e-6));
    Ok(())
}

fn model_matching(p: &MatchProblem, global: &Global, r: &mut Report) -> Outcome {
    let n = global.grid.unwrap_or(4096);
    r.input("grid", n).tolerance("agreement", 1e-4).tolerance("radius_slack", hardy::model_matching::RADIUS_SLACK);
    let sol = model_match(p)?;
    let ver = verify_match(p, &sol, n)?;
    r.output("r_star", sol.r_star)
        .output("achieved", sol.achieved)
        .output("grid_norm", ver.grid_norm)
        .output("C", sol.c.to_string())
        .output("c", to_value(&sol.c))
        .output("h", to_value(&sol.h))
        .output("f", to_value(&sol.f))
        .output("lambdas", cxs(&sol.lambdas))
        .output("mus", cxs(&sol.mus));
    r.flag("agrees", ver.agrees).flag("c_causal_stable", ver.c_causal_stable);
    Ok(())
}
