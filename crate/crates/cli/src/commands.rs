use std::fs;

use padic_spectra::elliptic::{
    count_points_bruteforce, hasse_window, hear_points, parse_element, serre_invariant, CurveSpec, EllipticModel,
    HearingResult, MATCH_TOLERANCE,
};
use padic_spectra::manifold::{
    build_projective_model, build_y_model, equalise_pair, equalising_number_of_map, matrix_minus_identity,
    matrix_norm, model_document, AnalyticMap, BallCheck, CellId, CellModel, Equalised, Equalising, PolynomialMap,
    PolynomialMapSpec,
};
use padic_spectra::padic_arith::rational;
use padic_spectra::spectral::{
    enumerate_spectrum, sample_paths, Basis, ConstantTerm, Exponent, OperatorMatrix, SamplerConfig,
    SpectralCalculus,
};
use padic_spectra::{Error, FiniteField};
use serde_json::{json, Value};

use crate::config::{BasisArg, EqualiseCommand, ModelCommand, ModelSelector, RunConfig};
use crate::output::{CliError, Report, Table};

type CliResult<T> = Result<T, CliError>;

struct Built {
    model: CellModel,
    curve: Option<(CurveSpec, u64)>,
}

fn curve(args: &ModelCommand) -> CliResult<CurveSpec> {
    let (Some(a4), Some(a6)) = (&args.a4, &args.a6) else {
        return Err(CliError::precondition("an elliptic curve needs --a4 and --a6"));
    };
    let field = FiniteField::new(args.p, args.f)?;
    let a = parse_element(&field, a4)?;
    let b = parse_element(&field, a6)?;
    Ok(CurveSpec::new(field, a, b)?)
}

fn build(args: &ModelCommand) -> CliResult<Built> {
    Ok(match args.model {
        ModelSelector::Projective => {
            Built { model: build_projective_model(args.p, args.n, args.m)?.into_model(), curve: None }
        }
        ModelSelector::Y => Built { model: build_y_model(args.p, args.n, args.m)?.into_model(), curve: None },
        ModelSelector::Elliptic => {
            let curve = curve(args)?;
            let e = EllipticModel::build(&curve, args.m)?;
            let n = e.point_count();
            Built { model: e.into_model(), curve: Some((curve, n)) }
        }
    })
}

fn exponent(args: &ModelCommand) -> CliResult<Exponent> {
    if !args.s.is_finite() {
        return Err(CliError::precondition(format!("s = {} is not finite", args.s)));
    }
    let s = Exponent::from_f64(args.s);
    if args.exact && s.as_integer().is_none() {
        return Err(CliError::precondition(format!("--exact needs an integer s, got {}", args.s)));
    }
    Ok(s)
}

fn base_cell(model: &CellModel, x: usize) -> CliResult<CellId> {
    if x >= model.cell_count() {
        return Err(CliError::precondition(format!("cell {x} out of range 0..{}", model.cell_count())));
    }
    Ok(CellId(x))
}

fn header(model: &CellModel) -> Value {
    json!(model_document(model, false).model)
}

fn curve_json(curve: &CurveSpec) -> Value {
    json!({ "equation": curve.to_string(), "a4": curve.a().to_string(), "a6": curve.b().to_string() })
}

pub fn nerve(args: &ModelCommand) -> CliResult<Report> {
    let built = build(args)?;
    let doc = model_document(&built.model, args.cells);
    let mut body = json!({ "config": RunConfig::new("nerve", args) });
    body.as_object_mut().unwrap().extend(serde_json::to_value(doc).unwrap().as_object().unwrap().clone());
    Ok(Report::json(body))
}

pub fn spectrum(args: &ModelCommand) -> CliResult<Report> {
    let built = build(args)?;
    let s = exponent(args)?;
    let spectrum = enumerate_spectrum(&built.model, s)?;
    let mut entries = spectrum.entries().to_vec();
    if !args.exact {
        entries.iter_mut().for_each(|e| e.lambda_exact = None);
    }
    let table = Table {
        headers: vec!["mu_B", "depth", "region", "lambda", "lambda_exact", "multiplicity"],
        rows: entries
            .iter()
            .map(|e| {
                vec![
                    rational::format(&e.ball_measure),
                    e.depth.to_string(),
                    e.region.clone(),
                    e.lambda.to_string(),
                    e.lambda_exact.as_ref().map(rational::format).unwrap_or_default(),
                    e.multiplicity.to_string(),
                ]
            })
            .collect(),
    };
    let body = json!({
        "config": RunConfig::new("spectrum", args),
        "model": header(&built.model),
        "s": s.value(),
        "constant_mode": spectrum.constant_mode(),
        "complement_dimension": spectrum.complement_dimension(),
        "wavelet_count": spectrum.wavelet_count(),
        "lambda0": entries.first().map(|e| e.lambda),
        "entries": entries,
    });
    Ok(Report { json: body, table: Some(table), exit: 0 })
}

fn calculus_inputs(args: &ModelCommand) -> (Basis, ConstantTerm) {
    let basis = match args.basis {
        BasisArg::Wavelet => Basis::Wavelet,
        BasisArg::Complete => Basis::Complete,
    };
    let constant = if args.paper_constant_term { ConstantTerm::One } else { ConstantTerm::Normalized };
    (basis, constant)
}

pub fn heat(args: &ModelCommand) -> CliResult<Report> {
    let built = build(args)?;
    let model = &built.model;
    let s = exponent(args)?;
    let x = base_cell(model, args.x)?;
    let op = OperatorMatrix::new(model, s)?;
    let spectrum = enumerate_spectrum(model, s)?;
    let (basis, constant) = calculus_inputs(args);
    let calc = SpectralCalculus::new(&op, &spectrum, basis, constant)?;
    let mu = rational::to_f64(model.cell_measure());
    let mut rows = Vec::new();
    let mut table = Table { headers: vec!["t", "y", "H"], rows: Vec::new() };
    for &t in &args.t {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::precondition(format!("t = {t} must be positive")));
        }
        let row = calc.heat_row(t, x);
        let mass: f64 = row.iter().sum::<f64>() * mu;
        table.rows.extend(row.iter().enumerate().map(|(y, h)| vec![t.to_string(), y.to_string(), h.to_string()]));
        rows.push(json!({ "t": t, "mass": mass, "values": row }));
    }
    let body = json!({
        "config": RunConfig::new("heat", args),
        "model": header(model),
        "x": args.x,
        "rows": rows,
    });
    Ok(Report { json: body, table: Some(table), exit: 0 })
}

pub fn green(args: &ModelCommand) -> CliResult<Report> {
    let built = build(args)?;
    let model = &built.model;
    let s = exponent(args)?;
    let x = base_cell(model, args.x)?;
    let op = OperatorMatrix::new(model, s)?;
    let spectrum = enumerate_spectrum(model, s)?;
    let (basis, constant) = calculus_inputs(args);
    if args.exact && basis != Basis::Wavelet {
        return Err(CliError::precondition("--exact Green values need the wavelet basis"));
    }
    let calc = SpectralCalculus::new(&op, &spectrum, basis, constant)?;
    let values: Vec<f64> = model.cells().map(|y| calc.green(x, y)).collect();
    let exact: Option<Vec<String>> = args.exact.then(|| {
        model.cells().map(|y| calc.green_exact(x, y).map(|r| rational::format(&r)).unwrap_or_default()).collect()
    });
    let table = Table {
        headers: vec!["y", "G", "G_exact"],
        rows: values
            .iter()
            .enumerate()
            .map(|(y, g)| {
                let e = exact.as_ref().map(|e| e[y].clone()).unwrap_or_default();
                vec![y.to_string(), g.to_string(), e]
            })
            .collect(),
    };
    let mut body = json!({
        "config": RunConfig::new("green", args),
        "model": header(model),
        "x": args.x,
        "values": values,
    });
    if let Some(exact) = exact {
        body["exact"] = json!(exact);
    }
    Ok(Report { json: body, table: Some(table), exit: 0 })
}

pub fn simulate(args: &ModelCommand) -> CliResult<Report> {
    let built = build(args)?;
    let model = &built.model;
    let s = exponent(args)?;
    let x = base_cell(model, args.x)?;
    let &[t_end] = args.t.as_slice() else {
        return Err(CliError::precondition("simulate takes a single --t"));
    };
    if args.paths == 0 {
        return Err(CliError::precondition("--paths must be positive"));
    }
    let op = OperatorMatrix::new(model, s)?;
    let config = SamplerConfig { t_end, paths: args.paths, seed: args.seed, logged_paths: args.logged_paths };
    let report = sample_paths(&op, x, &config)?;
    let spectrum = enumerate_spectrum(model, s)?;
    let calc = SpectralCalculus::new(&op, &spectrum, Basis::Complete, ConstantTerm::Normalized)?;
    let tv = report.total_variation(&calc.transition_law(t_end, x));
    let table = Table {
        headers: vec!["path", "time", "from", "to"],
        rows: report
            .events
            .iter()
            .map(|e| vec![e.path.to_string(), e.time.to_string(), e.from.to_string(), e.to.to_string()])
            .collect(),
    };
    let body = json!({
        "config": RunConfig::new("simulate", args),
        "model": header(model),
        "report": report,
        "heat_law_total_variation": tv,
    });
    Ok(Report { json: body, table: Some(table), exit: 0 })
}

/// Whether the printed inversion formulas are consistent with a successful hearing.
fn paper_formulas_agree(heard: &HearingResult, n: u64) -> bool {
    let f = &heard.paper_formulas;
    let sandwich = f.sandwich_contains(n).unwrap_or(true);
    let printed = f
        .printed_lambda0
        .is_none_or(|p| (p - heard.lambda0).abs() <= MATCH_TOLERANCE * heard.lambda0.abs());
    sandwich && printed
}

pub fn hear(args: &ModelCommand) -> CliResult<Report> {
    if args.model != ModelSelector::Elliptic {
        return Err(CliError::precondition("hear needs --model elliptic"));
    }
    let built = build(args)?;
    let (curve, n_model) = built.curve.as_ref().expect("elliptic model");
    let s = exponent(args)?;
    let q = curve.q();
    let spectrum = enumerate_spectrum(&built.model, s)?;
    let lambda0 = spectrum.lambda0().ok_or_else(|| CliError::precondition("the model has no wavelets"))?.lambda;
    let n_bruteforce = count_points_bruteforce(curve);
    debug_assert_eq!(*n_model, n_bruteforce);
    let config = RunConfig::new("hear", args);
    let (recovered, formulas, method, err) = match hear_points(lambda0, q, s, args.m) {
        Ok(h) => (Some(h.n), Some(h.paper_formulas.clone()), Some(h.method), Some(h)),
        Err(e @ (Error::NoMatch { .. } | Error::Ambiguous { .. })) => {
            let body = json!({
                "config": config,
                "curve": curve_json(curve),
                "s": s.value(),
                "lambda0": lambda0,
                "N_recovered": null,
                "N_bruteforce": n_bruteforce,
                "error": { "code": e.code(), "message": e.to_string() },
                "agree": false,
            });
            return Ok(Report { json: body, table: None, exit: 3 });
        }
        Err(e) => return Err(e.into()),
    };
    let heard = err.expect("hearing result");
    let agree = recovered == Some(n_bruteforce);
    let paper_ok = paper_formulas_agree(&heard, n_bruteforce);
    let body = json!({
        "config": config,
        "curve": curve_json(curve),
        "s": s.value(),
        "lambda0": lambda0,
        "N_recovered": recovered,
        "N_bruteforce": n_bruteforce,
        "method": method,
        "window": heard.window,
        "paper_formulas": formulas,
        "paper_formulas_agree": paper_ok,
        "agree": agree,
    });
    let exit = if !agree {
        3
    } else if args.strict && !paper_ok {
        4
    } else {
        0
    };
    Ok(Report { json: body, table: None, exit })
}

pub fn count(args: &ModelCommand) -> CliResult<Report> {
    let curve = curve(args)?;
    let n = count_points_bruteforce(&curve);
    let q = curve.q();
    let roots: Vec<String> = curve.cubic_roots().iter().map(|r| r.to_string()).collect();
    let body = json!({
        "config": RunConfig::new("count", args),
        "curve": curve_json(&curve),
        "q": q,
        "N": n,
        "hasse_window": hasse_window(q),
        "serre_invariant": serre_invariant(n, q),
        "branch_points_rational": curve.branch_points_rational(),
        "cubic_roots": roots,
    });
    Ok(Report::json(body))
}

fn equalising_json(e: Equalising) -> Value {
    match e {
        Equalising::Number(n) => json!(n),
        Equalising::NotEqualising => json!("not-equalising"),
    }
}

pub fn equalise(args: &EqualiseCommand) -> CliResult<Report> {
    let text = fs::read_to_string(&args.map)
        .map_err(|e| CliError::precondition(format!("cannot read {}: {e}", args.map.display())))?;
    let spec: PolynomialMapSpec =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", args.map.display())))?;
    let f = PolynomialMap::from_spec(&spec)?;
    let out = equalise_pair(&f)?;
    let h = out.map();
    let linear = match &out {
        Equalised::AlreadyGood(f) => f.linear_part()?,
        Equalised::Transformed { linear_part, .. } => linear_part.clone(),
    };
    let norm = matrix_norm(&matrix_minus_identity(&linear, h.working_precision())?);
    let n_min = h.domain().iter().map(|d| d.min_radius_exponent()).max().unwrap_or(0);
    let max_radius = args.max_radius.min(h.working_precision() as i64 - BallCheck::default().extra_digits as i64);
    let body = json!({
        "config": RunConfig::new("equalise", args),
        "already_equalised": matches!(out, Equalised::AlreadyGood(_)),
        "shift": out.shift(),
        "linear_part_minus_identity_norm": rational::format(&norm),
        "equalising_number_of_input": equalising_json(equalising_number_of_map(&f, n_min, max_radius, BallCheck::default())?),
        "equalising_number_of_output": equalising_json(equalising_number_of_map(h, n_min, max_radius, BallCheck::default())?),
        "h": h.to_spec(),
    });
    Ok(Report::json(body))
}
