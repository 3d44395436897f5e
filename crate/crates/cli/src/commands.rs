use pangle_core::bounds::{
    best_constant_sweep, cauchy_schwarz_error_bound, classical_bounds, comparison_bound,
    dragomir_integral_bound, dragomir_reverse_bound, hermite_hadamard_chain, hile_refinement_chain,
    refined_comparison_bound, skew_comparison_bound, BoundOutcome, BoundReport, ChainReport,
};
use pangle_core::certify::{certify, dual_witness, Criterion, SearchConfig, Verdict};
use pangle_core::distance::{alpha_p_closed_form_ips, angular, sign_identity_ips, skew_relation};
use pangle_core::geometry::{
    beta_non_metric_witness, completeness_experiment, consistency_check, metric_audit_alpha,
    nonequivalence_table, translation_invariance_probe, SequenceLaw,
};
use pangle_core::quadrature::QuadConfig;
use pangle_core::series::{alpha_p_series, alpha_zero_series, Order};
use pangle_core::{alpha_p, tol, verify, Error, ExecMode, NormSpec, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{
    AuditArgs, BoundsArgs, CertifyArgs, Command, ComputeArgs, CriterionName, SweepArgs, VerifyArgs,
};

/// Exit status 0 or 2; errors map to 1 elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A counterexample was found or a check failed.
    Flagged,
}

/// A CSV-ready table; `limit` becomes a leading comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub limit: Option<f64>,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub body: Value,
    pub table: Option<Table>,
    pub status: Status,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn flag(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Flagged
    }
}

fn mode(sequential: bool) -> ExecMode {
    if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    }
}

fn required(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required here")))
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Compute(a) => compute(a),
        Command::Bounds(a) => bounds(a),
        Command::Audit(a) => audit(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::VerifyAll(a) => verify_all(a),
        Command::Replay { .. } => unreachable!("replay is handled by the caller"),
    }
}

fn compute(a: &ComputeArgs) -> Result<Outcome> {
    let (spec, x, y, p) = (&a.pair.norm, &a.pair.x, &a.pair.y, a.p);
    let r = angular(spec, x, y, p)?;
    let rel = skew_relation(spec, x, y, p)?;
    let mut status = Status::Ok;
    let closed = if spec.has_inner_product() {
        let c = alpha_p_closed_form_ips(spec, x, y, p)?;
        let err = tol::rel_err(c, r.alpha);
        status = flag(err <= 1e-10);
        json!({
            "alpha": c,
            "relative_error": err,
            "alpha_sq_minus_beta_sq": sign_identity_ips(spec, x, y, p)?,
        })
    } else {
        Value::Null
    };
    let body = json!({
        "p": p,
        "norm_x": spec.norm(x)?,
        "norm_y": spec.norm(y)?,
        "alpha": r.alpha,
        "beta": r.beta,
        "skew_relation": {
            "beta": rel.beta,
            "rescaled_alpha": rel.rescaled_alpha,
            "residual": rel.residual,
            "relative": rel.relative(),
        },
        "closed_form": closed,
    });
    Ok(Outcome {
        body,
        table: None,
        status,
    })
}

/// Turns "does not apply here" errors into skipped rows.
fn applicable(name: &str, r: Result<BoundReport>) -> Result<BoundOutcome> {
    match r {
        Ok(b) => Ok(BoundOutcome::Evaluated(b)),
        Err(
            e @ (Error::InvalidParameter(_) | Error::LinearlyDependent | Error::NoInnerProduct),
        ) => Ok(BoundOutcome::Skipped {
            name: name.into(),
            reason: e.to_string(),
        }),
        Err(e) => Err(e),
    }
}

/// Shortest round-trip text, in exponent form outside `[1e-4, 1e16)`.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), num)
}

fn bounds(a: &BoundsArgs) -> Result<Outcome> {
    let (spec, x, y, p, q) = (&a.pair.norm, &a.pair.x, &a.pair.y, a.p, a.q);
    let quad = QuadConfig::new(a.quad_tol);
    if a.chain {
        let chains = [
            (
                "hile_refinement",
                hile_refinement_chain(spec, x, y, p, q, &quad),
            ),
            (
                "hermite_hadamard",
                hermite_hadamard_chain(spec, x, y, p, q, &quad),
            ),
        ];
        let mut entries = Vec::new();
        let mut rows = Vec::new();
        let mut ok = true;
        for (name, r) in chains {
            match r {
                Ok(c) => {
                    ok &= c.nondecreasing;
                    rows.extend(chain_rows(name, &c));
                    entries.push(json!({"chain": name, "status": "evaluated", "report": c}));
                }
                Err(e @ (Error::InvalidParameter(_) | Error::LinearlyDependent)) => {
                    entries
                        .push(json!({"chain": name, "status": "skipped", "reason": e.to_string()}));
                }
                Err(e) => return Err(e),
            }
        }
        let table = Table {
            limit: None,
            headers: vec!["chain", "index", "label", "value"],
            rows,
        };
        return Ok(Outcome {
            body: json!({ "p": p, "q": q, "chains": entries }),
            table: Some(table),
            status: flag(ok),
        });
    }

    let mut out = vec![
        BoundOutcome::Evaluated(comparison_bound(spec, x, y, p, q)?),
        BoundOutcome::Evaluated(refined_comparison_bound(spec, x, y, p, q)?),
        applicable("skew_comparison", skew_comparison_bound(spec, x, y, p))?,
    ];
    out.extend(classical_bounds(spec, x, y, p)?);
    out.push(applicable(
        "dragomir_upper",
        dragomir_integral_bound(spec, x, y, p, q, &quad).map(|(b, _)| b),
    )?);
    out.push(applicable(
        "dragomir_lower",
        dragomir_reverse_bound(spec, x, y, p, q, &quad),
    )?);
    out.push(applicable(
        "cauchy_schwarz_error",
        cauchy_schwarz_error_bound(spec, x, y),
    )?);

    let mut rows = Vec::new();
    let mut ok = true;
    for o in &out {
        if let BoundOutcome::Evaluated(b) = o {
            ok &= b.holds();
            rows.push(vec![
                b.name.clone(),
                opt(b.lower),
                opt(b.upper),
                num(b.value),
                opt(b.slack_lower),
                opt(b.slack_upper),
                b.holds().to_string(),
            ]);
        }
    }
    let evaluated = rows.len();
    let table = Table {
        limit: None,
        headers: vec![
            "name",
            "lower",
            "upper",
            "value",
            "slack_lower",
            "slack_upper",
            "holds",
        ],
        rows,
    };
    let body = json!({ "p": p, "q": q, "evaluated": evaluated, "all_hold": ok, "bounds": out });
    Ok(Outcome {
        body,
        table: Some(table),
        status: flag(ok),
    })
}

fn chain_rows(name: &str, c: &ChainReport) -> Vec<Vec<String>> {
    c.terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            vec![
                name.to_string(),
                i.to_string(),
                t.label.clone(),
                num(t.value),
            ]
        })
        .collect()
}

fn audit(a: &AuditArgs) -> Result<Outcome> {
    let spec = &a.norm;
    let dim = a.dim.or(spec.dimension()).unwrap_or(3);
    let mut body = Map::new();
    let mut tables = Vec::new();
    let mut ok = true;

    if a.metric {
        let r = metric_audit_alpha(
            spec,
            required(a.p, "p")?,
            dim,
            a.samples,
            a.seed,
            mode(a.sequential),
        )?;
        ok &= r.passed();
        let rows = [
            ("symmetry", &r.symmetry),
            ("identity", &r.identity),
            ("triangle", &r.triangle),
        ]
        .iter()
        .map(|(n, x)| {
            vec![
                n.to_string(),
                x.passed.to_string(),
                x.violations.to_string(),
                num(x.worst_slack),
            ]
        })
        .collect();
        tables.push(Table {
            limit: None,
            headers: vec!["axiom", "passed", "violations", "worst_slack"],
            rows,
        });
        body.insert("metric".into(), to_value(&r));
    }
    if a.beta_witness {
        let w = beta_non_metric_witness(spec, required(a.p, "p")?, dim)?;
        body.insert("beta_witness".into(), to_value(&w));
    }
    if a.translation {
        let w = translation_invariance_probe(spec, required(a.p, "p")?, dim)?;
        body.insert("translation".into(), to_value(&w));
    }
    if a.nonequiv {
        let t = nonequivalence_table(required(a.p, "p")?, required(a.q, "q")?, a.t, &a.n)?;
        let rows = t
            .rows
            .iter()
            .map(|r| vec![num(r.n), num(r.constant), num(r.kernel_ratio)])
            .collect();
        tables.push(Table {
            limit: None,
            headers: vec!["n", "constant", "kernel_ratio"],
            rows,
        });
        body.insert("nonequivalence".into(), to_value(&t));
    }
    if a.completeness {
        let (in_a, in_b) = completeness_experiment(
            spec,
            required(a.p, "p")?,
            required(a.q, "q")?,
            dim,
            a.resolution,
        )?;
        ok &= in_a.monotone() && in_b.monotone();
        let mut rows = Vec::new();
        for (set, e) in [("A", &in_a), ("B", &in_b)] {
            for m in &e.moduli {
                rows.push(vec![
                    set.into(),
                    m.from.to_string(),
                    num(m.observed),
                    num(m.supremum),
                ]);
            }
        }
        tables.push(Table {
            limit: None,
            headers: vec!["set", "from", "observed", "supremum"],
            rows,
        });
        body.insert(
            "completeness".into(),
            json!({ "set_a": in_a, "set_b": in_b }),
        );
    }
    if a.consistency {
        let laws: Vec<SequenceLaw> = match a.law {
            Some(l) => vec![l.into()],
            None => vec![
                SequenceLaw::Converging,
                SequenceLaw::Alternating,
                SequenceLaw::Scaled,
            ],
        };
        let p = required(a.p, "p")?;
        let mut reports = Vec::new();
        let mut rows = Vec::new();
        for law in laws {
            let r = consistency_check(spec, p, dim.max(2), law)?;
            ok &= r.agree;
            let name = to_value(&law).as_str().unwrap_or_default().to_string();
            for row in &r.rows {
                rows.push(vec![
                    name.clone(),
                    row.n.to_string(),
                    num(row.norm_distance),
                    num(row.alpha_distance),
                ]);
            }
            reports.push(r);
        }
        tables.push(Table {
            limit: None,
            headers: vec!["law", "n", "norm_distance", "alpha_distance"],
            rows,
        });
        body.insert("consistency".into(), to_value(&reports));
    }
    if body.is_empty() {
        return Err(Error::InvalidParameter(
            "select at least one of --metric, --beta-witness, --translation, --nonequiv, --completeness, --consistency".into(),
        ));
    }
    let table = if tables.len() == 1 {
        tables.pop()
    } else {
        None
    };
    Ok(Outcome {
        body: Value::Object(body),
        table,
        status: flag(ok),
    })
}

fn certify_cmd(a: &CertifyArgs) -> Result<Outcome> {
    let spec = &a.norm;
    let cfg = SearchConfig {
        dim: a.dim.or(spec.dimension()).unwrap_or(2),
        samples: a.samples,
        seed: a.seed,
        refine_steps: a.refine_steps,
        tolerance: a.tolerance,
        mode: mode(a.sequential),
        ..SearchConfig::default()
    };
    let criterion = match a.criterion {
        CriterionName::AlphaBeta => Criterion::AlphaBeta {
            p: required(a.p, "p")?,
        },
        CriterionName::Identity => Criterion::Identity {
            p: required(a.p, "p")?,
        },
        CriterionName::Shifted => Criterion::Shifted,
        CriterionName::Lorch => Criterion::Lorch,
        CriterionName::Ficken => Criterion::Ficken,
        CriterionName::Dual => {
            let d = dual_witness(spec, required(a.p, "p")?, &cfg)?;
            return Ok(Outcome {
                body: to_value(&d),
                table: None,
                status: Status::Flagged,
            });
        }
    };
    let v = certify(spec, criterion, &cfg)?;
    let status = flag(v.verdict == Verdict::ConsistentWithInnerProduct);
    Ok(Outcome {
        body: to_value(&v),
        table: None,
        status,
    })
}

fn sweep(a: &SweepArgs) -> Result<Outcome> {
    if a.best_constant {
        let t = best_constant_sweep(a.p, required(a.q, "q")?, &a.eps)?;
        let rows = t
            .rows
            .iter()
            .map(|r| vec![num(r.epsilon), num(r.ratio)])
            .collect();
        let table = Table {
            limit: Some(t.limit),
            headers: vec!["epsilon", "ratio"],
            rows,
        };
        return Ok(Outcome {
            body: to_value(&t),
            table: Some(table),
            status: Status::Ok,
        });
    }
    if !a.series {
        return Err(Error::InvalidParameter(
            "choose --best-constant or --series".into(),
        ));
    }
    let (x, y) = match (&a.x, &a.y) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::InvalidParameter(
                "--x and --y are required for --series".into(),
            ))
        }
    };
    if a.k.is_empty() {
        return Err(Error::InvalidParameter("empty K list".into()));
    }
    let spec = a
        .norm
        .clone()
        .unwrap_or_else(|| NormSpec::euclidean(x.dim()));
    let limit = alpha_p(&spec, x, y, a.p)?;
    let mut evals = Vec::new();
    for &k in &a.k {
        let e = if a.p == 0.0 {
            alpha_zero_series(&spec, x, y, Order::Fixed(k))?
        } else {
            alpha_p_series(&spec, x, y, a.p, Order::Fixed(k))?
        };
        evals.push(e);
    }
    let rows =
        a.k.iter()
            .zip(&evals)
            .map(|(k, e)| vec![k.to_string(), num(e.value), num(e.tail_bound)])
            .collect();
    let body = json!({ "p": a.p, "limit": limit, "K": a.k, "evaluations": evals });
    let table = Table {
        limit: Some(limit),
        headers: vec!["K", "value", "tail_bound"],
        rows,
    };
    Ok(Outcome {
        body,
        table: Some(table),
        status: Status::Ok,
    })
}

fn verify_all(a: &VerifyArgs) -> Result<Outcome> {
    let m = mode(a.sequential);
    let results: Vec<verify::CriterionOutcome> = if a.only.is_empty() {
        verify::run_all(m)
    } else {
        a.only
            .iter()
            .map(|&id| {
                verify::run(id, m)
                    .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))
            })
            .collect::<Result<_>>()?
    };
    for r in &results {
        eprintln!("{r}");
    }
    let ok = results.iter().all(|r| r.passed);
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                r.passed.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    // timings vary between runs, so they stay out of the body
    let summary: Vec<Value> = results
        .iter()
        .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }))
        .collect();
    let table = Table {
        limit: None,
        headers: vec!["id", "name", "passed", "detail"],
        rows,
    };
    Ok(Outcome {
        body: json!({ "passed": ok, "criteria": summary }),
        table: Some(table),
        status: flag(ok),
    })
}
