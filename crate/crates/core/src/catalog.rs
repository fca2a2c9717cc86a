//! Curve sources: a closed catalog of named families, explicit graphs
//! `y = f(x)`, and parametric curves `(x(t), y(t))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jet::{graph_jet_from_parametric, GraphJet, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogCurve {
    Line,
    Parabola,
    Power,
    XLogX,
    Spiral,
    Exp,
    Ellipse,
    Hyperbola,
}

impl CatalogCurve {
    pub const ALL: [CatalogCurve; 8] = [
        CatalogCurve::Line,
        CatalogCurve::Parabola,
        CatalogCurve::Power,
        CatalogCurve::XLogX,
        CatalogCurve::Spiral,
        CatalogCurve::Exp,
        CatalogCurve::Ellipse,
        CatalogCurve::Hyperbola,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogCurve::Line => "line",
            CatalogCurve::Parabola => "parabola",
            CatalogCurve::Power => "power",
            CatalogCurve::XLogX => "xlogx",
            CatalogCurve::Spiral => "spiral",
            CatalogCurve::Exp => "exp",
            CatalogCurve::Ellipse => "ellipse",
            CatalogCurve::Hyperbola => "hyperbola",
        }
    }

    /// Parameter names with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            CatalogCurve::Line => &[("m", 1.0), ("c", 0.0)],
            CatalogCurve::Parabola => &[("c", 1.0)],
            CatalogCurve::Power => &[("a", 3.0)],
            CatalogCurve::XLogX => &[("a", 0.0), ("b", 1.0)],
            CatalogCurve::Spiral => &[("a", 1.0), ("b", 1.0)],
            CatalogCurve::Exp => &[],
            CatalogCurve::Ellipse => &[("p", 2.0), ("q", 1.0)],
            CatalogCurve::Hyperbola => &[("p", 1.0), ("q", 1.0)],
        }
    }
}

impl fmt::Display for CatalogCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogCurve::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CatalogCurve::ALL.iter().map(|c| c.name()).collect();
                Error::InvalidSpec(format!(
                    "unknown catalog curve `{s}` (known: {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Catalog {
        curve: CatalogCurve,
        params: BTreeMap<String, f64>,
    },
    Expression(Expr),
    Parametric(Expr, Expr),
}

/// Either `y = f(x)` or `(x(t), y(t))` after resolving catalog entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Graph(Expr),
    Parametric(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub source: CurveSource,
    pub window: (f64, f64),
    pub count: usize,
}

/// One sample of a curve. `point` is present whenever the curve could be
/// evaluated there; `jet` fails at vertical tangents and domain errors.
#[derive(Debug)]
pub struct CurveSample {
    pub t: f64,
    pub point: Option<[f64; 2]>,
    pub jet: Result<GraphJet>,
}

fn p(v: f64) -> String {
    format!("({v:?})")
}

impl CurveSource {
    /// Catalog entry with `overrides` applied over the defaults.
    pub fn catalog(curve: CatalogCurve, overrides: &[(String, f64)]) -> Result<Self> {
        let mut params: BTreeMap<String, f64> = curve
            .defaults()
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        for (k, v) in overrides {
            match params.get_mut(k) {
                Some(slot) => *slot = *v,
                None => {
                    return Err(Error::InvalidSpec(format!(
                        "`{curve}` has no parameter `{k}`"
                    )))
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("parameter `{k}` must be finite")));
            }
        }
        let zero = |name: &str| params[name] == 0.0;
        let bad = match curve {
            CatalogCurve::Spiral => zero("b").then_some("b"),
            CatalogCurve::Ellipse | CatalogCurve::Hyperbola => {
                (zero("p") || zero("q")).then_some("p, q")
            }
            _ => None,
        };
        if let Some(name) = bad {
            return Err(Error::InvalidSpec(format!("`{curve}` needs nonzero {name}")));
        }
        Ok(CurveSource::Catalog { curve, params })
    }

    pub fn resolve(&self) -> Resolved {
        let (curve, params) = match self {
            CurveSource::Expression(e) => return Resolved::Graph(e.clone()),
            CurveSource::Parametric(x, y) => return Resolved::Parametric(x.clone(), y.clone()),
            CurveSource::Catalog { curve, params } => (curve, params),
        };
        let g = |k: &str| p(params[k]);
        let graph = |s: String| Resolved::Graph(parse(&s).expect("catalog text parses"));
        let para = |x: String, y: String| {
            Resolved::Parametric(
                parse(&x).expect("catalog text parses"),
                parse(&y).expect("catalog text parses"),
            )
        };
        match curve {
            CatalogCurve::Line => graph(format!("{}*x + {}", g("m"), g("c"))),
            CatalogCurve::Parabola => graph(format!("{}*x^2", g("c"))),
            CatalogCurve::Power => graph(format!("x^{}", g("a"))),
            CatalogCurve::XLogX => graph(format!("{}*x + {}*x*ln(abs(x))", g("a"), g("b"))),
            CatalogCurve::Exp => graph("exp(x)".into()),
            CatalogCurve::Spiral => {
                let c = p(params["a"] / params["b"]);
                para(format!("exp({c}*t)*cos(t)"), format!("exp({c}*t)*sin(t)"))
            }
            CatalogCurve::Ellipse => para(format!("{}*cos(t)", g("p")), format!("{}*sin(t)", g("q"))),
            CatalogCurve::Hyperbola => para(
                format!("{}*(exp(t) + exp(-t))/2", g("p")),
                format!("{}*(exp(t) - exp(-t))/2", g("q")),
            ),
        }
    }

    /// A window free of vertical tangents and domain problems.
    pub fn default_window(&self) -> (f64, f64) {
        match self {
            CurveSource::Catalog { curve, params } => match curve {
                CatalogCurve::Line | CatalogCurve::Parabola | CatalogCurve::Exp => (-1.0, 1.0),
                CatalogCurve::Power | CatalogCurve::XLogX => (0.5, 2.0),
                CatalogCurve::Spiral => {
                    use std::f64::consts::FRAC_PI_2;
                    // x'(t) vanishes where tan t = c; take the half-turn between
                    // two such angles nearest t = 0, so the radius stays near 1
                    let c = params["a"] / params["b"];
                    let mid = if c > 0.0 { c.atan() - FRAC_PI_2 } else { c.atan() + FRAC_PI_2 };
                    // fast growth: keep the radius ratio across the window at e^4
                    let half = (FRAC_PI_2 - 0.2).min(2.0 / c.abs());
                    (mid - half, mid + half)
                }
                CatalogCurve::Ellipse => (0.2, std::f64::consts::PI - 0.2),
                CatalogCurve::Hyperbola => (0.2, 1.5),
            },
            _ => (-1.0, 1.0),
        }
    }
}

impl CurveSpec {
    pub fn new(source: CurveSource, window: Option<(f64, f64)>, count: usize) -> Result<Self> {
        let window = window.unwrap_or_else(|| source.default_window());
        if !window.0.is_finite() || !window.1.is_finite() {
            return Err(Error::InvalidSpec("window must be finite".into()));
        }
        if count < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 samples, got {count}")));
        }
        Ok(Self {
            source,
            window,
            count,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        let (a, b) = self.window;
        let n = self.count;
        (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect()
    }

    /// Closure producing the graph jet at parameter `t`.
    pub fn jet_fn(&self) -> impl Fn(f64) -> Result<GraphJet> {
        let resolved = self.source.resolve();
        move |t| jet_at(&resolved, t)
    }

    pub fn sample(&self) -> Vec<CurveSample> {
        let resolved = self.source.resolve();
        self.grid()
            .into_iter()
            .map(|t| {
                let point = point_at(&resolved, t).ok();
                CurveSample {
                    t,
                    point,
                    jet: jet_at(&resolved, t),
                }
            })
            .collect()
    }
}

pub fn point_at(r: &Resolved, t: f64) -> Result<[f64; 2]> {
    match r {
        Resolved::Graph(e) => Ok([t, e.eval(t)?]),
        Resolved::Parametric(x, y) => Ok([x.eval(t)?, y.eval(t)?]),
    }
}

pub fn jet_at(r: &Resolved, t: f64) -> Result<GraphJet> {
    match r {
        Resolved::Graph(e) => e.eval_jet(t),
        Resolved::Parametric(x, y) => {
            let tj = Jet::variable(t);
            graph_jet_from_parametric(&x.eval_series(&tj)?, &y.eval_series(&tj)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{curvature, sigma};
    use approx::assert_relative_eq;

    fn spec(curve: CatalogCurve, params: &[(&str, f64)]) -> CurveSpec {
        let o: Vec<_> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        CurveSpec::new(CurveSource::catalog(curve, &o).unwrap(), None, 9).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in CatalogCurve::ALL {
            assert_eq!(c.name().parse::<CatalogCurve>().unwrap(), c);
        }
        assert!("circle".parse::<CatalogCurve>().is_err());
    }

    #[test]
    fn default_windows_are_regular_where_expected() {
        for c in CatalogCurve::ALL {
            let s = spec(c, &[]);
            for smp in s.sample() {
                let j = smp.jet.unwrap_or_else(|e| panic!("{c} at {}: {e}", smp.t));
                assert!(j.is_finite());
                assert!(smp.point.is_some());
            }
        }
    }

    #[test]
    fn spiral_and_conics() {
        let s = spec(CatalogCurve::Spiral, &[("a", 0.0)]);
        for smp in s.sample() {
            let j = smp.jet.unwrap();
            assert!(curvature(&j).unwrap().abs() < 1e-12);
            assert_eq!(sigma(&j).unwrap(), 1);
        }
        let s = spec(CatalogCurve::Hyperbola, &[("p", 2.0)]);
        for smp in s.sample() {
            let j = smp.jet.unwrap();
            assert!(curvature(&j).unwrap().abs() < 1e-9);
            assert_eq!(sigma(&j).unwrap(), -1);
        }
        let s = spec(CatalogCurve::Ellipse, &[]);
        for smp in s.sample() {
            let j = smp.jet.unwrap();
            assert!(curvature(&j).unwrap().abs() < 1e-9);
            assert_eq!(sigma(&j).unwrap(), 1);
        }
    }

    #[test]
    fn power_default_matches_cubic() {
        let s = spec(CatalogCurve::Power, &[]);
        let j = s.jet_fn()(1.0).unwrap();
        assert_relative_eq!(curvature(&j).unwrap(), 2.065_591_117_977_289, max_relative = 1e-12);
    }

    #[test]
    fn bad_specs() {
        assert!(CurveSource::catalog(CatalogCurve::Exp, &[("a".into(), 1.0)]).is_err());
        assert!(CurveSource::catalog(CatalogCurve::Spiral, &[("b".into(), 0.0)]).is_err());
        let src = CurveSource::Expression(parse("x").unwrap());
        assert!(CurveSpec::new(src.clone(), None, 1).is_err());
        assert!(CurveSpec::new(src, Some((0.0, f64::INFINITY)), 5).is_err());
    }

    #[test]
    fn grid_hits_endpoints() {
        let s = CurveSpec::new(CurveSource::Expression(parse("x").unwrap()), Some((0.1, 0.7)), 7)
            .unwrap();
        let g = s.grid();
        assert_eq!(g[0], 0.1);
        assert_eq!(g[6], 0.7);
    }
}
