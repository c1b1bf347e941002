use std::fmt::Write;

use serde_json::{json, Value};

use singcurve_core::field::{Field, FieldError, Fq, Rationals};
use singcurve_core::invariants::{
    area_identity, delta, intersect_tree, mu_bar, parametrize_branch, zariski_sequence, Intersection, InvariantError,
};
use singcurve_core::milnor::{check_conjecture, default_truncation, milnor_number, ConjOptions, ConjReport, MilnorError};
use singcurve_core::poly::{parse_poly, reduced_check, BiPoly, PolyError};
use singcurve_core::tree::{build_tree, TreeError};

use crate::args::{Command, FieldArgs, Format};
use crate::Failure;

type Out = Result<String, Failure>;

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::NotReduced | TreeError::UnitInput | TreeError::ZeroPolynomial | TreeError::Field(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Tree(t) => t.into(),
            InvariantError::NotIrreducible(_) | InvariantError::PrecisionExhausted(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<MilnorError> for Failure {
    fn from(e: MilnorError) -> Self {
        match e {
            MilnorError::Tree(t) => t.into(),
            MilnorError::Poly(p) => p.into(),
            MilnorError::TruncationUnstable { .. } => Failure::Input(format!("{e}; raise --trunc")),
        }
    }
}

fn json_out(v: Value) -> Out {
    Ok(serde_json::to_string_pretty(&v).map_err(|e| Failure::Internal(e.to_string()))? + "\n")
}

fn intersection_json(i: Intersection) -> Value {
    match i {
        Intersection::Finite(n) => json!(n),
        Intersection::Infinite => json!("infinity"),
    }
}

fn seed(flag: Option<u64>) -> Result<Option<u64>, Failure> {
    match std::env::var("SINGCURVE_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| Failure::Input(format!("SINGCURVE_SEED={s:?}: {e}"))),
        Err(_) => Ok(flag),
    }
}

pub fn run(cmd: &Command) -> Out {
    let fa = match cmd {
        Command::Check { f, primes, unit, trunc, verify, format } => {
            let primes: Vec<u64> = primes.clone().filter(|&p| Fq::prime(p).is_ok()).collect();
            if primes.is_empty() {
                return Err(Failure::Input("prime range contains no primes below 2^31".into()));
            }
            let opts = ConjOptions { unit: unit.clone(), truncation: *trunc, verify_shortcut: *verify };
            return render_check(&check_conjecture(f, &primes, &opts), *format);
        }
        Command::Tree { field, .. }
        | Command::Multiplicity { field }
        | Command::Delta { field }
        | Command::Mubar { field }
        | Command::Mu { field, .. }
        | Command::Intersect { field, .. }
        | Command::Semigroup { field }
        | Command::Parametrize { field, .. }
        | Command::AreaCheck { field } => field,
    };
    if fa.format == Format::Dot && !matches!(cmd, Command::Tree { .. }) {
        return Err(Failure::Input("--format dot is only available for `tree`".into()));
    }
    if fa.p == 0 {
        if fa.k != 1 {
            return Err(Failure::Input("-k needs a prime characteristic".into()));
        }
        return run_in(cmd, fa, &Rationals);
    }
    let k = match seed(fa.seed)? {
        Some(s) => Fq::with_seed(fa.p, fa.k, s)?,
        None => Fq::new(fa.p, fa.k)?,
    };
    run_in(cmd, fa, &k)
}

fn run_in<F: Field>(cmd: &Command, fa: &FieldArgs, k: &F) -> Out {
    let f = parse_poly(&fa.f, k)?;
    let fmt = fa.format;
    match cmd {
        Command::Tree { minimal, .. } => {
            let mut t = build_tree(&f, k)?.tree;
            if *minimal {
                t = t.minimalize();
            }
            match fmt {
                Format::Text => Ok(t.to_ascii()),
                Format::Dot => Ok(t.to_dot()),
                Format::Json => json_out(serde_json::to_value(t.to_json()).map_err(|e| Failure::Internal(e.to_string()))?),
            }
        }
        Command::Multiplicity { .. } => {
            let t = build_tree(&f, k)?.tree;
            let m = t.multiplicity();
            match fmt {
                Format::Json => json_out(json!({ "M": m, "abs_M": m.unsigned_abs(), "N_v": t.vertex_report() })),
                _ => Ok(format!(
                    "|M| = {} (tree multiplicity, worked-examples sign convention)\nM = {m}\n",
                    m.unsigned_abs()
                )),
            }
        }
        Command::Delta { .. } => {
            let d = delta(&f, k)?;
            match fmt {
                Format::Json => json_out(json!({ "delta": d })),
                _ => Ok(format!("{d}\n")),
            }
        }
        Command::Mubar { .. } => {
            let m = mu_bar(&f, k)?;
            match fmt {
                Format::Json => json_out(json!({ "mu_bar": m })),
                _ => Ok(format!("{m}\n")),
            }
        }
        Command::Mu { unit, trunc, .. } => {
            if f.is_zero() {
                return Err(TreeError::ZeroPolynomial.into());
            }
            if !k.is_zero(&f.constant_term(k)) {
                return Err(TreeError::UnitInput.into());
            }
            if !reduced_check(&f, k).reduced {
                return Err(TreeError::NotReduced.into());
            }
            let unit = unit.as_deref().map(|u| parse_poly(u, k)).transpose()?;
            let d = match (&unit, trunc) {
                (None, _) => 0,
                (Some(_), Some(d)) => *d,
                (Some(_), None) => default_truncation(mu_bar(&f, k).map_err(|e| {
                    Failure::Input(format!("cannot choose a truncation degree ({e}); pass --trunc"))
                })?),
            };
            let mu = milnor_number(&f, unit.as_ref().map(|u| (u, d)), k)?;
            match fmt {
                Format::Json => {
                    let mut v = json!({ "mu": intersection_json(mu) });
                    if unit.is_some() {
                        v["truncation"] = json!(d);
                    }
                    json_out(v)
                }
                _ => Ok(format!("{mu}\n")),
            }
        }
        Command::Intersect { g, .. } => {
            let g: BiPoly<F::Elem> = parse_poly(g, k)?;
            let i = intersect_tree(&f, &g, k)?;
            match fmt {
                Format::Json => json_out(json!({ "intersection": intersection_json(i) })),
                _ => Ok(format!("{i}\n")),
            }
        }
        Command::Semigroup { .. } => {
            let s = zariski_sequence(&build_tree(&f, k)?.tree)?;
            let c = s.conductor();
            match fmt {
                Format::Json => json_out(json!({ "zariski": s.v, "d": s.d(), "conductor": c, "delta": c / 2 })),
                _ => {
                    let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
                    Ok(format!(
                        "zariski sequence: ({})\ngcds: ({})\nconductor: {c}\ndelta: {}\n",
                        list(&s.v),
                        list(&s.d()),
                        c / 2
                    ))
                }
            }
        }
        Command::Parametrize { terms, .. } => parametrize(&f, *terms, fmt, k),
        Command::AreaCheck { .. } => {
            let a = area_identity(&f, k)?;
            let out = match fmt {
                Format::Json => serde_json::to_string_pretty(&a).map_err(|e| Failure::Internal(e.to_string()))? + "\n",
                _ => format!("-M = {}\narea formula = {}\nterms: {:?}\nequal: {}\n", a.lhs, a.rhs, a.terms, a.equal),
            };
            if a.equal {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Internal(format!("area identity fails: -M = {} but the area formula gives {}", a.lhs, a.rhs)))
            }
        }
        Command::Check { .. } => unreachable!("handled without a field"),
    }
}

/// Raise the precision until both coordinates show `terms` nonzero terms (or
/// are exhausted at the cap).
fn parametrize<F: Field>(f: &BiPoly<F::Elem>, terms: usize, fmt: Format, k: &F) -> Out {
    const CAP: usize = 4096;
    let mut prec = 32;
    let par = loop {
        let par = parametrize_branch(f, prec, k)?;
        let enough = |s: &[F::Elem]| s.iter().filter(|c| !par.field.is_zero(c)).count() >= terms;
        if (enough(&par.phi) && enough(&par.psi)) || prec >= CAP {
            break par;
        }
        prec *= 2;
    };
    let (x, y) = par.format(terms);
    let field = match (par.field.characteristic(), par.field.degree()) {
        (0, _) => "Q".to_string(),
        (p, 1) => format!("F_{p}"),
        (p, d) => format!("F_{p}^{d}"),
    };
    match fmt {
        Format::Json => json_out(json!({
            "field": field,
            "x": x,
            "y": y,
            "precision": par.precision,
            "ord_x": par.ord_phi(),
            "ord_y": par.ord_psi(),
        })),
        _ => Ok(format!("field: {field}\nx = {x}\ny = {y}\n")),
    }
}

fn render_check(reports: &[ConjReport], fmt: Format) -> Out {
    let mu_text = |r: &ConjReport| r.mu.map_or("-".to_string(), |m| m.to_string());
    match fmt {
        Format::Json => json_out(Value::Array(
            reports
                .iter()
                .map(|r| {
                    json!({
                        "prime": r.prime,
                        "skipped": r.skipped,
                        "abs_M": r.abs_m,
                        "N_v": r.n_v,
                        "p_divides_some_N_v": r.divisors,
                        "mu": r.mu.map(intersection_json),
                        "mu_bar": r.mu_bar,
                        "equal": r.equal,
                        "conjecture_consistent": r.conjecture_consistent,
                        "shortcut_applied": r.shortcut_applied,
                    })
                })
                .collect(),
        )),
        Format::Dot => Err(Failure::Input("--format dot is only available for `tree`".into())),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:>6} {:>6} {:>9} {:>6} {:>7} {:>9} {:>11}  N_v", "p", "|M|", "mu", "mu_bar", "equal", "p | N_v", "consistent");
            for r in reports {
                if let Some(why) = &r.skipped {
                    let _ = writeln!(s, "{:>6} skipped: {why}", r.prime);
                    continue;
                }
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>9} {:>6} {:>7} {:>9} {:>11}  {:?}{}",
                    r.prime,
                    r.abs_m,
                    mu_text(r),
                    r.mu_bar,
                    r.equal,
                    r.divisors,
                    r.conjecture_consistent,
                    r.n_v,
                    if r.shortcut_applied { "  (prime bound)" } else { "" }
                );
            }
            let checked: Vec<&ConjReport> = reports.iter().filter(|r| r.skipped.is_none()).collect();
            let bad = checked.iter().filter(|r| !r.conjecture_consistent).count();
            let _ = writeln!(s, "{} primes checked, {} inconsistent with the conjecture", checked.len(), bad);
            Ok(s)
        }
    }
}
