use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gacurve::affine::{orbit_curve, Generator, Point};
use gacurve::catalog::{CatalogCurve, CurveSource, CurveSpec};
use gacurve::expr::parse;
use gacurve::frames::right_frame;
use gacurve::invariants::{classify_singular, is_regular, InvariantRecord};
use gacurve::jet::GraphJet;
use gacurve::reconstruct::{
    classify_constant, graph_jet_along, integrate_frenet, invariants_along, reconstruct_constant,
    CurvatureProfile, FrenetSample, FrenetState,
};
use gacurve::verify::run_sweep;
use gacurve::Error;
use serde_json::{json, Value};

use crate::num::{exact, g9, opt_exact, opt_g9};
use crate::svg::{Glyph, Plot};
use crate::{ProfileArgs, SourceArgs};

pub const SCHEMA: u32 = 1;
/// Largest `|k_s|` accepted as constant curvature.
pub const K_S_TOL: f64 = 1e-6;

pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Res<T = ()> = std::result::Result<T, Failure>;

/// stdout writes that tolerate a closed pipe (`gacurve ... | head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn write_file(path: &Path, contents: &str) -> Res {
    fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn pair(v: &[f64]) -> (f64, f64) {
    (v[0], v[1])
}

fn source(src: &SourceArgs) -> Res<Option<CurveSource>> {
    let given = [
        src.catalog.is_some(),
        src.curve.is_some(),
        src.parametric.is_some(),
    ];
    match given.iter().filter(|g| **g).count() {
        0 => return Ok(None),
        1 => {}
        _ => return Err(Failure::usage("give only one of --catalog, --curve, --parametric")),
    }
    let parse_expr = |s: &str| parse(s).map_err(|e| Failure::usage(format!("`{s}`: {e}")));
    if let Some(name) = &src.catalog {
        let curve: CatalogCurve = name.parse()?;
        let mut overrides = Vec::new();
        for p in &src.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("--param expects K=V, got `{p}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("--param {k}: `{v}` is not a number")))?;
            overrides.push((k.trim().to_string(), v));
        }
        return Ok(Some(CurveSource::catalog(curve, &overrides)?));
    }
    if let Some(text) = &src.curve {
        return Ok(Some(CurveSource::Expression(parse_expr(text)?)));
    }
    let xy = src.parametric.as_ref().expect("one source present");
    Ok(Some(CurveSource::Parametric(
        parse_expr(&xy[0])?,
        parse_expr(&xy[1])?,
    )))
}

fn spec(src: &SourceArgs, count: usize) -> Res<CurveSpec> {
    let source = source(src)?
        .ok_or_else(|| Failure::usage("a curve is required: --catalog, --curve or --parametric"))?;
    Ok(CurveSpec::new(source, src.window.as_deref().map(pair), count)?)
}

fn describe(src: &CurveSource) -> Value {
    match src {
        CurveSource::Catalog { curve, params } => json!({"catalog": curve.name(), "params": params}),
        CurveSource::Expression(e) => json!({"curve": e.to_string()}),
        CurveSource::Parametric(x, y) => json!({"parametric": [x.to_string(), y.to_string()]}),
    }
}

/// Graph jets of all samples; vertical tangents are reported and skipped,
/// any other failure is fatal.
fn jets(spec: &CurveSpec) -> Res<Vec<(f64, GraphJet)>> {
    let mut out = Vec::new();
    for s in spec.sample() {
        match s.jet {
            Ok(j) => out.push((s.t, j)),
            Err(Error::VerticalTangent | Error::NotAGraph) => {
                eprintln!("warning: vertical tangent at t = {}, sample skipped", g9(s.t));
            }
            Err(e) => return Err(Failure::usage(format!("at t = {}: {e}", g9(s.t)))),
        }
    }
    Ok(out)
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied(), &mut out);
    for r in rows {
        line(&mut r.iter().map(String::as_str), &mut out);
    }
    out
}

fn print_json(v: &Value) {
    say!("{}
", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn sigma_str(s: Option<i8>) -> String {
    s.map(|v| if v > 0 { "+1" } else { "-1" }.to_string())
        .unwrap_or_else(|| "-".into())
}

pub fn invariants(src: &SourceArgs, count: usize, as_json: bool, out: Option<&Path>) -> Res {
    let spec = spec(src, count)?;
    let samples = jets(&spec)?;
    let records: Vec<(f64, InvariantRecord)> =
        samples.iter().map(|(t, j)| (*t, InvariantRecord::at(j))).collect();
    let all_singular = !records.is_empty() && records.iter().all(|(_, r)| !r.regular);
    let singular_class = if all_singular {
        let js: Vec<GraphJet> = samples.iter().map(|(_, j)| *j).collect();
        classify_singular(&js).ok()
    } else {
        None
    };

    if let Some(path) = out {
        let mut csv = String::from("t,x,y,S1,S2,S3,sigma,regular,ds_dx,k,k_s,kind\n");
        for (t, r) in &records {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                exact(*t),
                exact(r.x),
                exact(r.y),
                exact(r.s1),
                exact(r.s2),
                exact(r.s3),
                r.sigma.map(|s| s.to_string()).unwrap_or_default(),
                r.regular,
                opt_exact(r.ds_dx),
                opt_exact(r.k),
                opt_exact(r.k_s),
                r.kind.map(|k| format!("{k:?}")).unwrap_or_default()
            );
        }
        write_file(path, &csv)?;
    }

    if as_json {
        let recs: Vec<Value> = records
            .iter()
            .map(|(t, r)| {
                let mut v = serde_json::to_value(r).expect("record serializes");
                v["t"] = json!(t);
                v
            })
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "command": "invariants",
            "source": describe(&spec.source),
            "records": recs,
            "singular_class": singular_class,
        }));
    } else {
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|(t, r)| {
                vec![
                    g9(*t),
                    g9(r.x),
                    g9(r.y),
                    g9(r.s1),
                    g9(r.s2),
                    g9(r.s3),
                    sigma_str(r.sigma),
                    r.regular.to_string(),
                    opt_g9(r.ds_dx),
                    opt_g9(r.k),
                    opt_g9(r.k_s),
                    r.kind.map(|k| format!("{k:?}")).unwrap_or_else(|| "-".into()),
                ]
            })
            .collect();
        say!(
            "{}",
            table(
                &["t", "x", "y", "S1", "S2", "S3", "sigma", "regular", "ds_dx", "k", "k_s", "kind"],
                &rows
            )
        );
        if let Some(kind) = singular_class {
            say!("all samples singular: {kind:?}\n");
        }
    }
    Ok(())
}

pub fn frames(src: &SourceArgs, count: usize, as_json: bool) -> Res {
    let spec = spec(src, count)?;
    let mut recs = Vec::new();
    for (t, j) in jets(&spec)? {
        match right_frame(&j) {
            Ok(f) => recs.push((t, f)),
            Err(_) => eprintln!("warning: singular point at t = {}, no frame", g9(t)),
        }
    }
    if as_json {
        let v: Vec<Value> = recs
            .iter()
            .map(|(t, f)| {
                let mut v = serde_json::to_value(f).expect("frame serializes");
                v["t_param"] = json!(t);
                v
            })
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "command": "frames",
            "source": describe(&spec.source),
            "frames": v,
        }));
        return Ok(());
    }
    let v2 = |x: f64, y: f64| format!("({}, {})", g9(x), g9(y));
    let rows: Vec<Vec<String>> = recs
        .iter()
        .map(|(t, f)| {
            vec![
                g9(*t),
                format!(
                    "[[{}, {}], [{}, {}]]",
                    g9(f.a[(0, 0)]),
                    g9(f.a[(0, 1)]),
                    g9(f.a[(1, 0)]),
                    g9(f.a[(1, 1)])
                ),
                g9(f.det),
                v2(f.e1.x, f.e1.y),
                v2(f.e2.x, f.e2.y),
                v2(f.t.x, f.t.y),
                v2(f.n.x, f.n.y),
            ]
        })
        .collect();
    say!("{}", table(&["t", "A", "det", "e1", "e2", "t_vec", "n"], &rows));
    Ok(())
}

pub fn classify(src: &SourceArgs, count: usize, as_json: bool) -> Res {
    let spec = spec(src, count)?;
    let samples = jets(&spec)?;
    if samples.len() < 2 {
        return Err(Failure::usage("fewer than 2 usable samples"));
    }
    let recs: Vec<InvariantRecord> = samples.iter().map(|(_, j)| InvariantRecord::at(j)).collect();
    let emit = |v: Value, text: String| {
        if as_json {
            print_json(&v);
        } else {
            say!("{text}");
        }
    };

    if recs.iter().all(|r| !r.regular) {
        let js: Vec<GraphJet> = samples.iter().map(|(_, j)| *j).collect();
        let kind = classify_singular(&js)?;
        emit(
            json!({"schema": SCHEMA, "command": "classify", "source": describe(&spec.source),
                   "constant": true, "singular": kind}),
            format!("singular curve: {kind:?}\n"),
        );
        return Ok(());
    }

    let not_constant = |why: String, max_ks: Option<f64>| {
        emit(
            json!({"schema": SCHEMA, "command": "classify", "source": describe(&spec.source),
                   "constant": false, "reason": why, "max_abs_k_s": max_ks}),
            String::new(),
        );
        Failure {
            code: 3,
            msg: format!("NotConstantCurvature: {why}"),
        }
    };
    if recs.iter().any(|r| !r.regular) {
        return Err(not_constant("window mixes regular and singular points".into(), None));
    }
    let sigma = recs[0].sigma.expect("regular");
    if recs.iter().any(|r| r.sigma != Some(sigma)) {
        return Err(not_constant("sigma changes sign on the window".into(), None));
    }
    let ks: Vec<f64> = recs.iter().map(|r| r.k.expect("regular")).collect();
    let max_ks = recs
        .iter()
        .map(|r| r.k_s.expect("regular").abs())
        .fold(0.0, f64::max);
    if !(max_ks <= K_S_TOL) {
        return Err(not_constant(
            format!("max |k_s| = {} exceeds {}", g9(max_ks), g9(K_S_TOL)),
            Some(max_ks),
        ));
    }
    let k = ks.iter().sum::<f64>() / ks.len() as f64;
    let c = classify_constant(k, sigma);
    let mut text = format!("family: {}\nk: {}\nsigma: {}\n", c.family, g9(k), sigma_str(Some(sigma)));
    for (name, v) in &c.params {
        let _ = writeln!(text, "{name}: {}", g9(*v));
    }
    for alt in &c.congruent_params {
        let parts: Vec<String> = alt.iter().map(|(n, v)| format!("{n} = {}", g9(*v))).collect();
        let _ = writeln!(text, "congruent: {}", parts.join(", "));
    }
    emit(
        json!({"schema": SCHEMA, "command": "classify", "source": describe(&spec.source),
               "constant": true, "k": k, "sigma": sigma, "max_abs_k_s": max_ks,
               "family": c.family, "params": c.params, "congruent_params": c.congruent_params}),
        text,
    );
    Ok(())
}

fn read_samples(path: &Path) -> Res<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let (mut s, mut k) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums: Option<Vec<f64>> = cells.iter().take(2).map(|c| c.parse().ok()).collect();
        match nums {
            Some(v) if v.len() == 2 => {
                s.push(v[0]);
                k.push(v[1]);
            }
            _ if i == 0 => {} // header
            _ => {
                return Err(Failure::usage(format!(
                    "{}:{}: expected `s,k`",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok((s, k))
}

struct Reconstruction {
    profile: CurvatureProfile,
    samples: Vec<FrenetSample>,
}

fn build_reconstruction(p: &ProfileArgs, src: &SourceArgs, count: usize) -> Res<Reconstruction> {
    let source = source(src)?;
    if count < 2 {
        return Err(Failure::usage("need at least 2 samples"));
    }
    // frame and invariants of the source curve, if any
    let from_curve = match &source {
        Some(s) => {
            let spec = CurveSpec::new(s.clone(), src.window.as_deref().map(pair), 2)?;
            let at = p.at.unwrap_or(0.5 * (spec.window.0 + spec.window.1));
            let j = spec.jet_fn()(at)?;
            let rec = InvariantRecord::at(&j);
            if !rec.regular {
                return Err(Failure::usage(format!("source curve is singular at t = {}", g9(at))));
            }
            Some((FrenetState::from_graph_jet(&j)?, rec))
        }
        None => None,
    };
    let sigma = p
        .sigma
        .or(from_curve.as_ref().and_then(|(_, r)| r.sigma))
        .ok_or_else(|| Failure::usage("--sigma is required without a source curve"))?;
    let n_profiles = [p.k.is_some(), p.k_expr.is_some(), p.k_samples.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if n_profiles > 1 {
        return Err(Failure::usage("give only one of --k, --k-expr, --k-samples"));
    }
    let profile = if let Some(k) = p.k {
        CurvatureProfile::constant(k, sigma)?
    } else if let Some(text) = &p.k_expr {
        let e = parse(text).map_err(|e| Failure::usage(format!("`{text}`: {e}")))?;
        CurvatureProfile::expression(e, sigma)?
    } else if let Some(path) = &p.k_samples {
        let (s, k) = read_samples(path)?;
        CurvatureProfile::sampled(s, k, sigma)?
    } else if let Some((_, rec)) = &from_curve {
        CurvatureProfile::constant(rec.k.expect("regular"), sigma)?
    } else {
        return Err(Failure::usage("a curvature is required: --k, --k-expr, --k-samples or a source curve"));
    };
    let f0 = from_curve
        .map(|(f, _)| f)
        .unwrap_or_else(FrenetState::identity);

    let (s0, s1) = p.span.as_deref().map(pair).unwrap_or((-1.0, 1.0));
    if !(s0.is_finite() && s1.is_finite() && s1 > s0) {
        return Err(Failure::usage("--span needs finite S0 < S1"));
    }
    let grid: Vec<f64> = (0..count)
        .map(|i| if i + 1 == count { s1 } else { s0 + (s1 - s0) * i as f64 / (count - 1) as f64 })
        .collect();

    let samples = match (&profile, p.rk4) {
        (CurvatureProfile::Constant { k, sigma }, false) => {
            reconstruct_constant(*k, *sigma, &grid, Some(&f0))?
        }
        _ => integrate_to_grid(&profile, &f0, &grid, p.step)?,
    };
    Ok(Reconstruction { profile, samples })
}

/// RK4 from the initial frame at `s = 0` to every grid point, outwards in
/// both directions.
fn integrate_to_grid(
    profile: &CurvatureProfile,
    f0: &FrenetState,
    grid: &[f64],
    h: f64,
) -> Res<Vec<FrenetSample>> {
    let mut out: Vec<Option<FrenetSample>> = vec![None; grid.len()];
    let split = grid.partition_point(|&s| s < 0.0);
    let mut walk = |idx: &mut dyn Iterator<Item = usize>| -> Res {
        let (mut s, mut state) = (0.0, *f0);
        for i in idx {
            let path = integrate_frenet(profile, &state, (s, grid[i]), h)?;
            let last = *path.last().expect("path has the start point");
            state = last.state;
            s = grid[i];
            out[i] = Some(FrenetSample { s, state });
        }
        Ok(())
    };
    walk(&mut (split..grid.len()))?;
    walk(&mut (0..split).rev())?;
    Ok(out.into_iter().map(|s| s.expect("every index visited")).collect())
}

fn svg_from_points(
    points: Vec<Option<[f64; 2]>>,
    glyphs: Vec<Glyph>,
    title: String,
) -> Res<String> {
    let mut runs: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut cur = Vec::new();
    for p in points {
        match p {
            Some(p) if p[0].is_finite() && p[1].is_finite() => cur.push(p),
            _ => {
                if cur.len() > 1 {
                    runs.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    if cur.len() > 1 {
        runs.push(cur);
    }
    if runs.is_empty() {
        return Err(Failure::usage("fewer than 2 drawable samples"));
    }
    Ok(Plot {
        runs,
        glyphs,
        title,
    }
    .render())
}

fn glyph_of(j: &GraphJet) -> Option<Glyph> {
    let f = right_frame(j).ok()?;
    Some(Glyph {
        base: f.base,
        arrows: vec![
            ("e1", [f.e1.x, f.e1.y]),
            ("e2", [f.e2.x, f.e2.y]),
            ("t", [f.t.x, f.t.y]),
            ("n", [f.n.x, f.n.y]),
        ],
    })
}

pub fn reconstruct(
    p: &ProfileArgs,
    src: &SourceArgs,
    count: usize,
    as_json: bool,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Res {
    let rec = build_reconstruction(p, src, count)?;
    let rows: Vec<(f64, [f64; 2], Option<InvariantRecord>)> = rec
        .samples
        .iter()
        .map(|smp| {
            let r = smp.state.r();
            (smp.s, [r.x, r.y], invariants_along(&rec.profile, smp).ok())
        })
        .collect();
    let k_of = |r: &Option<InvariantRecord>| r.as_ref().and_then(|r| r.k);
    let sigma_of = |r: &Option<InvariantRecord>| r.as_ref().and_then(|r| r.sigma);

    if let Some(path) = out {
        let mut csv = String::from("s,x,y,k,sigma\n");
        for (s, p, r) in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                exact(*s),
                exact(p[0]),
                exact(p[1]),
                opt_exact(k_of(r)),
                sigma_of(r).map(|v| v.to_string()).unwrap_or_default()
            );
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = svg {
        let doc = svg_from_points(
            rows.iter().map(|(_, p, _)| Some(*p)).collect(),
            Vec::new(),
            "reconstruction".into(),
        )?;
        write_file(path, &doc)?;
    }
    let classification = match rec.profile {
        CurvatureProfile::Constant { k, sigma } => Some(classify_constant(k, sigma)),
        _ => None,
    };
    if as_json {
        let samples: Vec<Value> = rows
            .iter()
            .map(|(s, p, r)| json!({"s": s, "x": p[0], "y": p[1], "k": k_of(r), "sigma": sigma_of(r)}))
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "command": "reconstruct",
            "sigma": rec.profile.sigma(),
            "classification": classification,
            "samples": samples,
        }));
    } else if out.is_none() && svg.is_none() {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|(s, p, r)| {
                vec![g9(*s), g9(p[0]), g9(p[1]), opt_g9(k_of(r)), sigma_str(sigma_of(r))]
            })
            .collect();
        say!("{}", table(&["s", "x", "y", "k", "sigma"], &body));
    } else if let Some(c) = classification {
        say!("family: {}\n", c.family);
    }
    Ok(())
}

pub fn orbit(
    generator: &[f64],
    point: &[f64],
    window: Option<&[f64]>,
    count: usize,
    as_json: bool,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Res {
    if count < 2 {
        return Err(Failure::usage("need at least 2 samples"));
    }
    let g = generator;
    let x = Generator::from_rows([g[0], g[1], g[2]], [g[3], g[4], g[5]]);
    let p = Point::new(point[0], point[1]);
    let (a, b) = window.map(pair).unwrap_or((-1.0, 1.0));
    if !(a.is_finite() && b.is_finite()) {
        return Err(Failure::usage("window must be finite"));
    }
    let grid: Vec<f64> = (0..count)
        .map(|i| if i + 1 == count { b } else { a + (b - a) * i as f64 / (count - 1) as f64 })
        .collect();
    let orbit = orbit_curve(&x, &p, &grid);
    for t in &orbit.skipped {
        eprintln!("warning: vertical tangent at t = {}, sample skipped", g9(*t));
    }
    let recs: Vec<(f64, [f64; 2], InvariantRecord)> = orbit
        .samples
        .iter()
        .map(|s| (s.t, s.point, InvariantRecord::at(&s.jet)))
        .collect();

    if let Some(path) = out {
        let mut csv = String::from("t,x,y,k,sigma\n");
        for (t, p, r) in &recs {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                exact(*t),
                exact(p[0]),
                exact(p[1]),
                opt_exact(r.k),
                r.sigma.map(|v| v.to_string()).unwrap_or_default()
            );
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = svg {
        let pts = grid
            .iter()
            .map(|t| {
                let m = gacurve::affine::one_param_subgroup(&x, *t);
                let q = m.apply(&p);
                Some([q.x, q.y])
            })
            .collect();
        write_file(path, &svg_from_points(pts, Vec::new(), "orbit".into())?)?;
    }
    if as_json {
        let samples: Vec<Value> = recs
            .iter()
            .map(|(t, p, r)| {
                json!({"t": t, "x": p[0], "y": p[1], "regular": r.regular, "k": r.k,
                       "sigma": r.sigma, "S2": r.s2})
            })
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "command": "orbit",
            "canonical_form": x.canonical_form(),
            "samples": samples,
            "skipped": orbit.skipped,
        }));
    } else if out.is_none() && svg.is_none() {
        let body: Vec<Vec<String>> = recs
            .iter()
            .map(|(t, p, r)| {
                vec![
                    g9(*t),
                    g9(p[0]),
                    g9(p[1]),
                    r.regular.to_string(),
                    opt_g9(r.k),
                    sigma_str(r.sigma),
                ]
            })
            .collect();
        say!("{}", table(&["t", "x", "y", "regular", "k", "sigma"], &body));
    }
    Ok(())
}

pub fn verify(trials: usize, seed: u64, as_json: bool, fault: bool) -> Res {
    let report = run_sweep(trials, seed, fault);
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["schema"] = json!(SCHEMA);
        v["command"] = json!("verify");
        print_json(&v);
    } else {
        say!("sweep: {}  seed: {}  trials: {}\n", report.sweep, report.seed, report.trials);
        let body: Vec<Vec<String>> = report
            .laws
            .iter()
            .map(|l| {
                vec![
                    l.law.name().to_string(),
                    l.checks.to_string(),
                    g9(l.max_rel_err),
                    g9(l.tolerance),
                    if l.pass { "pass" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        say!("{}", table(&["law", "checks", "max_rel_err", "tol", "result"], &body));
        say!("overall: {}\n", if report.pass { "pass" } else { "FAIL" });
    }
    if report.pass {
        Ok(())
    } else {
        let names: Vec<&str> = report.failing().iter().map(|l| l.name()).collect();
        Err(Failure {
            code: 1,
            msg: format!("law violations: {}", names.join(", ")),
        })
    }
}

pub fn plot(
    src: &SourceArgs,
    p: &ProfileArgs,
    count: usize,
    frames: Option<usize>,
    svg: &Path,
) -> Res {
    if frames == Some(0) {
        return Err(Failure::usage("--frames must be at least 1"));
    }
    let every = frames.unwrap_or(0);
    let (points, jets, title): (Vec<Option<[f64; 2]>>, Vec<Option<GraphJet>>, String) = if p.any() {
        let rec = build_reconstruction(p, src, count)?;
        let pts = rec
            .samples
            .iter()
            .map(|s| {
                let r = s.state.r();
                Some([r.x, r.y])
            })
            .collect();
        let js = rec
            .samples
            .iter()
            .map(|s| graph_jet_along(&rec.profile, s).ok())
            .collect();
        (pts, js, "reconstruction".into())
    } else {
        let spec = spec(src, count)?;
        let mut pts = Vec::new();
        let mut js = Vec::new();
        for s in spec.sample() {
            match &s.jet {
                Err(e @ (Error::Domain(_) | Error::DivisionByZeroJet)) if s.point.is_none() => {
                    eprintln!("warning: at t = {}: {e}", g9(s.t));
                }
                _ => {}
            }
            pts.push(s.point);
            js.push(s.jet.ok());
        }
        (pts, js, describe(&spec.source).to_string())
    };
    let regular: Vec<bool> = jets
        .iter()
        .map(|j| j.as_ref().is_some_and(is_regular))
        .collect();
    if !regular.iter().any(|r| *r) {
        eprintln!("warning: no regular samples; frame glyphs omitted");
    }
    let glyphs: Vec<Glyph> = if every > 0 {
        jets.iter()
            .enumerate()
            .filter(|(i, _)| i % every == 0 && regular[*i])
            .filter_map(|(_, j)| j.as_ref().and_then(glyph_of))
            .collect()
    } else {
        Vec::new()
    };
    write_file(svg, &svg_from_points(points, glyphs, title)?)
}
