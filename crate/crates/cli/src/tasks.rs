//! Execution of document tasks into JSON results.

use anyhow::{anyhow, bail, Result};
use padyn_core::dynamics::{
    check_commute, criterion_a, criterion_b, is_stable, log_derivative_integral_check, lubin_log,
    newton_root_bound_check, solve_commuting, wideg_shape_check, CriterionBDiagnosis, Stability,
    UnstableReason,
};
use padyn_core::formal::{
    build_group_law, endomorphism, factorial_bound_check, is_endomorphism, padic_iterate,
    un_commuter_check, AxiomCheck, Certification, GroupLaw,
};
use padyn_core::semiconj::{build_f0, build_u0, multiplicity_transport_check, verify_semiconjugacy};
use padyn_core::series::{newton_polygon, root_valuations, weierstrass_degree, TruncSeries, Wideg};
use padyn_core::Error;
use serde_json::{json, Map, Value};

use crate::doc::{Problem, Task};
use crate::literal::parse_exponent;
use crate::render::{self, verdict};

/// Task status, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Certified,
    CertifiedNegative,
    Indeterminate,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::CertifiedNegative => "certified-negative",
            Status::Indeterminate => "indeterminate",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => 0,
            Status::CertifiedNegative => 1,
            Status::Indeterminate => 2,
            Status::Error => 3,
        }
    }
}

impl From<Certification> for Status {
    fn from(c: Certification) -> Self {
        match c {
            Certification::Certified => Status::Certified,
            Certification::CertifiedNegative => Status::CertifiedNegative,
            Certification::Indeterminate => Status::Indeterminate,
        }
    }
}

fn classify(e: &anyhow::Error) -> Status {
    match e.downcast_ref::<Error>() {
        Some(Error::PrecisionExhausted(_)) => Status::Indeterminate,
        _ => Status::Error,
    }
}

/// Named sub-results of one task, each with its own status.
struct Checks {
    entries: Map<String, Value>,
    worst: Status,
}

impl Checks {
    fn new() -> Self {
        Self {
            entries: Map::new(),
            worst: Status::Certified,
        }
    }

    fn run<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> Result<(Certification, Value)>,
    {
        let (status, mut value) = match f() {
            Ok((c, v)) => (Status::from(c), v),
            Err(e) => (classify(&e), json!({ "message": format!("{e:#}") })),
        };
        if let Value::Object(m) = &mut value {
            m.insert("status".into(), json!(status.as_str()));
        } else {
            value = json!({ "status": status.as_str(), "value": value });
        }
        self.worst = self.worst.max(status);
        self.entries.insert(name.into(), value);
    }

    fn finish(self) -> (Status, Value) {
        (self.worst, Value::Object(self.entries))
    }
}

pub fn run_task(problem: &Problem, task: &Task) -> (Status, Value) {
    match execute(problem, task) {
        Ok(r) => r,
        Err(e) => {
            let status = classify(&e);
            (status, json!({ "message": format!("{e:#}") }))
        }
    }
}

fn execute(pb: &Problem, task: &Task) -> Result<(Status, Value)> {
    match task {
        Task::Analyze { f, m } => analyze(pb.get(f)?, m),
        Task::Log { f } => log(pb.get(f)?),
        Task::Group {
            log,
            f,
            total_cap,
            endomorphisms,
            un,
        } => group(pb, log, f, *total_cap, endomorphisms, un),
        Task::Endo {
            log,
            f,
            a,
            total_cap,
            compare,
        } => endo(pb, log, f, a, *total_cap, compare),
        Task::Iterate {
            log,
            f,
            u,
            a,
            total_cap,
        } => iterate(pb, log, f, u, a, *total_cap),
        Task::Commute { f, g, a } => commute(pb, pb.get(f)?, g, a),
        Task::Semiconj {
            f,
            m,
            h,
            f_s,
            u,
            n,
        } => semiconj(pb, f, *m, h, f_s, u, *n),
    }
}

fn analyze(f: &TruncSeries, ms: &[u64]) -> Result<(Status, Value)> {
    let mut c = Checks::new();
    c.run("wideg", || {
        Ok(match weierstrass_degree(f)? {
            Wideg::Finite(q) => (Certification::Certified, json!({ "value": q })),
            Wideg::Infinite => (Certification::Certified, json!({ "value": "infinite" })),
            Wideg::BeyondCap => (Certification::Indeterminate, json!({ "value": "beyond-cap" })),
        })
    });
    c.run("wideg_shape", || {
        let s = wideg_shape_check(f)?;
        Ok((
            verdict(s.shape_holds),
            json!({
                "d": s.d,
                "q": s.q,
                "holds": s.shape_holds,
                "first_violation": s.first_violation,
                "exact": s.exact,
            }),
        ))
    });
    c.run("stability", || {
        Ok(match is_stable(f, None)? {
            Stability::Stable => (Certification::Certified, json!({ "value": "stable" })),
            Stability::Unstable(UnstableReason::Zero) => (
                Certification::CertifiedNegative,
                json!({ "value": "unstable", "reason": "zero" }),
            ),
            Stability::Unstable(UnstableReason::RootOfUnity) => (
                Certification::CertifiedNegative,
                json!({ "value": "unstable", "reason": "root-of-unity" }),
            ),
            Stability::UnstableAtPrecision { precision } => (
                Certification::Indeterminate,
                json!({ "value": "root-of-unity-at-precision", "precision": precision }),
            ),
        })
    });
    c.run("newton_polygon", || {
        Ok((Certification::Certified, render::newton(&newton_polygon(f)?)))
    });
    c.run("root_valuations", || {
        Ok((
            Certification::Certified,
            json!({ "roots": render::root_valuations(&root_valuations(f)?) }),
        ))
    });
    c.run("root_bound", || {
        let r = newton_root_bound_check(f, 1)?;
        Ok((
            verdict(r.holds),
            json!({
                "n": r.n,
                "bound": render::ratio(&r.bound),
                "min_root_valuation": r.min_root_valuation.as_ref().map(render::ratio),
            }),
        ))
    });
    c.run("criterion_a", || {
        let a = criterion_a(f)?;
        Ok((
            verdict(a.holds),
            json!({ "holds": a.holds, "witness": a.witness, "exact": a.exact }),
        ))
    });
    for &m in ms {
        c.run(&format!("criterion_b_m{m}"), || {
            let b = criterion_b(f, m)?;
            Ok((
                verdict(b.holds),
                json!({
                    "m": m,
                    "holds": b.holds,
                    "diagnosis": diagnosis(&b.diagnosis),
                    "g": render::polynomial(&b.g),
                    "g0": b.g0.as_ref().map(render::polynomial),
                    "derivative_part": b.derivative_part.as_ref().map(render::polynomial),
                    "certified_precision": b.certified_precision,
                }),
            ))
        });
    }
    Ok(c.finish())
}

fn diagnosis(d: &CriterionBDiagnosis) -> Value {
    match d {
        CriterionBDiagnosis::Holds => json!("holds"),
        CriterionBDiagnosis::DegreeNotDivisible { degree } => {
            json!({ "degree-not-divisible": degree })
        }
        CriterionBDiagnosis::NotMthPower => json!("not-mth-power"),
        CriterionBDiagnosis::NotSeparable => json!("not-separable"),
        CriterionBDiagnosis::DerivativeRootsNotContained => json!("derivative-roots-not-contained"),
    }
}

fn log(f: &TruncSeries) -> Result<(Status, Value)> {
    let mut c = Checks::new();
    let l = lubin_log(f);
    c.run("lubin_log", || {
        let l = l.clone()?;
        Ok((
            Certification::Certified,
            json!({
                "recursion": render::series(&l.series),
                "limit": render::series(&l.limit),
                "iterations": l.iterations,
                "agreement_precision": l.agreement.precision,
            }),
        ))
    });
    c.run("log_derivative_integral", || {
        let l = l.clone()?;
        let i = log_derivative_integral_check(&l.series)?;
        Ok((
            verdict(i.holds),
            json!({
                "holds": i.holds,
                "first_failure": i.first_failure,
                "min_valuation": i.min_valuation.map(|(v, k)| json!([v, k])),
                "exact": i.exact,
            }),
        ))
    });
    Ok(c.finish())
}

fn law(
    pb: &Problem,
    log: &Option<String>,
    f: &Option<String>,
    total_cap: Option<usize>,
) -> Result<GroupLaw> {
    let l = match (log, f) {
        (Some(name), _) => pb.get(name)?.clone(),
        (None, Some(name)) => lubin_log(pb.get(name)?)?.series,
        (None, None) => bail!("give either `log` or `f`"),
    };
    Ok(build_group_law(&l, total_cap)?)
}

fn axiom(a: &AxiomCheck) -> (Certification, Value) {
    (
        a.status,
        json!({ "first_failure": a.first_failure, "precision": a.precision }),
    )
}

fn group(
    pb: &Problem,
    log: &Option<String>,
    f: &Option<String>,
    total_cap: Option<usize>,
    endos: &[String],
    un: &[usize],
) -> Result<(Status, Value)> {
    let g = law(pb, log, f, total_cap)?;
    let mut c = Checks::new();
    c.run("law", || {
        let terms: Vec<Value> = g
            .s
            .terms()
            .map(|(i, j, x)| json!([i, j, render::scalar(x)]))
            .collect();
        Ok((
            Certification::Certified,
            json!({ "total_cap": g.total_cap(), "coefficients": terms }),
        ))
    });
    c.run("integrality", || {
        let r = &g.integrality;
        Ok((
            r.status,
            json!({
                "min_valuation": r.min_valuation,
                "worst": r.worst,
                "per_sj_min": r.per_sj_min,
                "indeterminate": r.indeterminate,
            }),
        ))
    });
    c.run("factorial_bound", || {
        let fb = factorial_bound_check(&g);
        Ok((
            fb.status,
            json!({ "first_failure": fb.first_failure, "indeterminate": fb.indeterminate }),
        ))
    });
    c.run("identity", || Ok(axiom(&g.axioms.identity)));
    c.run("commutativity", || Ok(axiom(&g.axioms.commutativity)));
    c.run("associativity", || Ok(axiom(&g.axioms.associativity)));
    for name in endos {
        c.run(&format!("endomorphism_{name}"), || {
            let e = is_endomorphism(&g, pb.get(name)?)?;
            Ok((
                verdict(e.holds),
                json!({ "first_failure": e.first_failure, "precision": e.precision }),
            ))
        });
    }
    for &n in un {
        c.run(&format!("un_commuter_{n}"), || {
            let fname = f.as_ref().ok_or_else(|| anyhow!("`un` needs `f`"))?;
            let r = un_commuter_check(&g, pb.get(fname)?, n)?;
            Ok((
                verdict(r.derivative_matches && r.commute.commutes),
                json!({
                    "series": render::series(&r.series),
                    "derivative_matches": r.derivative_matches,
                    "commutes": r.commute.commutes,
                    "first_failure": r.commute.first_failure,
                }),
            ))
        });
    }
    Ok(c.finish())
}

fn integrality_of(s: &TruncSeries) -> Certification {
    if s.coeffs().iter().any(|x| x.is_integral() == Some(false)) {
        Certification::CertifiedNegative
    } else if s.coeffs().iter().any(|x| x.is_integral().is_none()) {
        Certification::Indeterminate
    } else {
        Certification::Certified
    }
}

fn endo(
    pb: &Problem,
    log: &Option<String>,
    f: &Option<String>,
    a: &Value,
    total_cap: Option<usize>,
    compare: &Option<String>,
) -> Result<(Status, Value)> {
    let g = law(pb, log, f, total_cap)?;
    let a = pb.scalar(a)?;
    let e = endomorphism(&g, &a)?;
    let mut c = Checks::new();
    c.run("endomorphism", || {
        Ok((
            integrality_of(&e),
            json!({ "a": render::scalar(&a), "series": render::series(&e) }),
        ))
    });
    if let Some(name) = compare {
        c.run("comparison", || {
            let other = pb.get(name)?;
            let agr = e.compare(other)?;
            if agr.holds() {
                agr.certified(1)?;
            }
            Ok((
                verdict(agr.holds()),
                json!({
                    "with": name,
                    "first_mismatch": agr.first_mismatch,
                    "precision": agr.precision,
                }),
            ))
        });
    }
    Ok(c.finish())
}

fn iterate(
    pb: &Problem,
    log: &Option<String>,
    f: &Option<String>,
    u: &str,
    a: &Value,
    total_cap: Option<usize>,
) -> Result<(Status, Value)> {
    let g = law(pb, log, f, total_cap)?;
    let a = parse_exponent(a, &pb.ring)?;
    let u = pb.get(u)?;
    let mut c = Checks::new();
    c.run("iterate", || {
        let s = padic_iterate(&g, u, &a)?;
        let mut status = integrality_of(&s);
        let mut out = json!({ "a": render::scalar(&a), "series": render::series(&s) });
        if let Some(fname) = f {
            let cm = check_commute(pb.get(fname)?, &s)?;
            out["commutes_with_f"] = json!(cm.commutes);
            if !cm.commutes {
                status = Certification::CertifiedNegative;
            }
        }
        Ok((status, out))
    });
    Ok(c.finish())
}

fn commute(
    pb: &Problem,
    f: &TruncSeries,
    g: &Option<String>,
    a: &Option<Value>,
) -> Result<(Status, Value)> {
    let mut c = Checks::new();
    match (g, a) {
        (Some(name), None) => c.run("commute", || {
            let r = check_commute(f, pb.get(name)?)?;
            Ok((
                verdict(r.commutes),
                json!({
                    "with": name,
                    "commutes": r.commutes,
                    "first_failure": r.first_failure,
                    "precision": r.certified_precision,
                }),
            ))
        }),
        (None, Some(a)) => c.run("solve", || {
            let a = pb.scalar(a)?;
            let s = solve_commuting(f, &a)?;
            Ok((
                verdict(s.integral),
                json!({
                    "a": render::scalar(&a),
                    "series": render::series(&s.series),
                    "integral": s.integral,
                    "min_valuation": s.min_valuation.map(|(v, k)| json!([v, k])),
                }),
            ))
        }),
        _ => bail!("give exactly one of `g` and `a`"),
    }
    Ok(c.finish())
}

#[allow(clippy::too_many_arguments)]
fn semiconj(
    pb: &Problem,
    fname: &str,
    m: Option<u64>,
    h: &Option<String>,
    f_s: &Option<String>,
    u: &Option<String>,
    n: usize,
) -> Result<(Status, Value)> {
    let f = pb.get(fname)?;
    let mut c = Checks::new();
    if let Some(fs) = f_s {
        let hname = h.as_ref().ok_or_else(|| anyhow!("`f_s` needs `h`"))?;
        c.run("semiconjugacy", || {
            let r = verify_semiconjugacy(f, pb.get(hname)?, pb.get(fs)?)?;
            Ok((
                verdict(r.holds),
                json!({ "h": hname, "f_s": fs, "first_failure": r.first_failure, "precision": r.precision }),
            ))
        });
        return Ok(c.finish());
    }
    let m = m.ok_or_else(|| anyhow!("`m` is required unless `f_s` is given"))?;
    let crit = criterion_b(f, m)?;
    if !crit.holds {
        c.run("criterion_b", || {
            Ok((
                Certification::CertifiedNegative,
                json!({ "m": m, "diagnosis": diagnosis(&crit.diagnosis) }),
            ))
        });
        return Ok(c.finish());
    }
    let sc = build_f0(f, m)?;
    c.run("f0", || {
        Ok((
            Certification::Certified,
            json!({
                "m": m,
                "series": render::series(&sc.f0),
                "extension_degree": sc.extension_degree,
                "extension": render::ring(&sc.extension),
                "c": sc.c.coeffs(),
                "c_root": sc.c_root.coeffs(),
                "g": render::polynomial(&sc.pieces.g),
                "g0": render::polynomial(&sc.pieces.g0),
                "agreement_precision": sc.agreement.precision,
            }),
        ))
    });
    c.run("semiconjugacy", || {
        let fe = f.embed(&sc.embedding)?;
        let he = match h {
            Some(name) => pb.get(name)?.embed(&sc.embedding)?,
            None => sc.h.embed(&sc.embedding)?,
        };
        let cap = sc.f0.cap().min(fe.cap()).min(he.cap());
        let r = verify_semiconjugacy(&fe.truncate(cap), &he.truncate(cap), &sc.f0.truncate(cap))?;
        Ok((
            verdict(r.holds),
            json!({ "first_failure": r.first_failure, "precision": r.precision }),
        ))
    });
    c.run("multiplicity_transport", || {
        let t = multiplicity_transport_check(f, m, n)?;
        Ok((
            verdict(t.holds()),
            json!({
                "n": n,
                "simple_roots": t.simple_roots,
                "identity_holds": t.identity_holds,
                "root_valuations": render::root_valuations(&t.root_valuations),
            }),
        ))
    });
    if let Some(uname) = u {
        c.run("u0", || {
            let u0 = build_u0(pb.get(uname)?, &sc)?;
            Ok((Certification::Certified, json!({ "series": render::series(&u0) })))
        });
    }
    Ok(c.finish())
}
