use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use dstau::adler_moser::{adler_moser, match_kdv, q_to_t, residual, Recursion};
use dstau::catalog::CatalogPoint;
use dstau::formats::{
    laurent_to_json, parse_laurent, parse_realization, rational_matrix_to_json,
    unreduced_fractions,
};
use dstau::grassmann::{schur_nu, Partition, XElement};
use dstau::hirota::{
    ansatz_basis, fit_equations, verify_equation, AnsatzOptions, CorpusEntry, HirotaPoly,
};
use dstau::lie::{build_realization, heisenberg_basis, Family, Realization};
use dstau::rational::format_rational;
use dstau::series::series_root;
use dstau::tau::{
    default_n_max, plucker_support, root_order, stabilization_check, tau_sz, Point, TauOptions,
};
use dstau::{Poly, Time, WeightCut};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::golden;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Algebra(c) => algebra(c, out),
        Command::Schur(c) => schur(c, out),
        Command::Tau(c) => tau(c, out),
        Command::Fit(c) => fit(c, out),
        Command::Verify(c) => verify(c, out),
        Command::AdlerMoser(c) => adler_moser_cmd(c, out),
        Command::Table1(c) => table1(c, out),
    }
}

fn read(path: &Path) -> CliResult<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let bad = unreduced_fractions(&text);
    if !bad.is_empty() {
        eprintln!(
            "warning: {}: fractions not in lowest terms were normalized: {}",
            path.display(),
            bad.join(", ")
        );
    }
    Ok(text)
}

fn read_poly(path: &Path) -> CliResult<Poly> {
    let text = read(path)?;
    Poly::parse(&text).map_err(|e| CliError::from(e).context(&path.display().to_string()))
}

/// `path` or `path@W`.
fn corpus_item(spec: &str) -> CliResult<(String, Poly, Option<u32>)> {
    let (path, valid) = match spec.rsplit_once('@') {
        Some((p, w)) => {
            let w = w
                .parse::<u32>()
                .map_err(|_| CliError::Config(format!("bad weight in `{spec}`")))?;
            (p, Some(w))
        }
        None => (spec, None),
    };
    Ok((path.to_string(), read_poly(Path::new(path))?, valid))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn realization(spec: &AlgebraSpec) -> CliResult<Realization> {
    if let Some(path) = &spec.realization {
        let text = read(path)?;
        return parse_realization(&text)
            .map_err(|e| CliError::from(e).context(&path.display().to_string()));
    }
    let Some(name) = spec.algebra.as_deref() else {
        return Err(CliError::Config("give --algebra and --rank, or --realization".into()));
    };
    let split = name.find(|c: char| c.is_ascii_digit());
    let (letter, inline_rank) = match split {
        Some(i) => {
            let rank = name[i..]
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad algebra `{name}`")))?;
            (&name[..i], Some(rank))
        }
        None => (name, None),
    };
    let rank = match (inline_rank, spec.rank) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!("--algebra {name} conflicts with --rank {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::Config("--rank is required".into())),
    };
    Ok(build_realization(Family::parse(letter)?, rank)?)
}

fn parse_times(list: &[String]) -> CliResult<Vec<Time>> {
    list.iter()
        .map(|s| Time::parse(s).ok_or_else(|| CliError::Config(format!("bad time `{s}`"))))
        .collect()
}

fn algebra(c: AlgebraCmd, out: &mut dyn Write) -> CliResult<()> {
    let r = realization(&c.spec)?;
    let exps: Vec<String> = r.exponents.iter().map(|t| t.label()).collect();
    let lambdas = heisenberg_basis(&r, r.coxeter + r.exponents.last().map_or(0, |t| t.index))?;
    match c.format {
        Format::Text => {
            writeln!(out, "family {}", r.family)?;
            writeln!(out, "rank {}", r.rank)?;
            writeln!(out, "size {}", r.m)?;
            writeln!(out, "dimension {}", r.basis.len())?;
            writeln!(out, "coxeter {}", r.coxeter)?;
            writeln!(out, "dual-coxeter {}", r.dual_coxeter)?;
            writeln!(out, "exponents {}", exps.join(" "))?;
            writeln!(out, "kappa {}", format_rational(&r.kappa))?;
            let grading: Vec<String> = r.grading.iter().map(|d| d.to_string()).collect();
            writeln!(out, "grading {}", grading.join(" "))?;
        }
        Format::Json => {
            let mats = |v: &[dstau::lie::QMatrix]| -> Value {
                Value::Array(v.iter().map(rational_matrix_to_json).collect())
            };
            let lam: Vec<Value> = lambdas
                .iter()
                .map(|l| json!({"time": l.label.label(), "terms": laurent_to_json(&l.matrix.to_poly())}))
                .collect();
            emit_json(
                out,
                &json!({
                    "family": r.family.to_string(),
                    "rank": r.rank,
                    "size": r.m,
                    "dimension": r.basis.len(),
                    "coxeter": r.coxeter,
                    "dual_coxeter": r.dual_coxeter,
                    "exponents": exps,
                    "kappa": format_rational(&r.kappa),
                    "grading": r.grading,
                    "e": mats(&r.e),
                    "f": mats(&r.f),
                    "h": mats(&r.h),
                    "e_theta_minus": rational_matrix_to_json(&r.e_theta_minus),
                    "e_theta_plus": rational_matrix_to_json(&r.e_theta_plus),
                    "lambda": lam,
                }),
            )?;
        }
    }
    Ok(())
}

fn schur(c: SchurCmd, out: &mut dyn Write) -> CliResult<()> {
    let r = realization(&c.spec)?;
    let nus: Vec<Partition> = c
        .partition
        .iter()
        .map(|s| Partition::parse(s))
        .collect::<Result<_, _>>()?;
    let values: Vec<Poly> = nus.iter().map(|nu| schur_nu(&r, nu)).collect::<Result<_, _>>()?;
    match c.format {
        Format::Text => {
            for v in &values {
                writeln!(out, "{v}")?;
            }
        }
        Format::Json => {
            let items: Vec<Value> = nus
                .iter()
                .zip(&values)
                .map(|(nu, v)| {
                    json!({
                        "partition": nu.to_string(),
                        "frobenius": nu.frobenius_string(),
                        "schur": v.to_string(),
                        "terms": v.to_json(),
                    })
                })
                .collect();
            emit_json(out, &Value::Array(items))?;
        }
    }
    Ok(())
}

fn tau(c: TauCmd, out: &mut dyn Write) -> CliResult<()> {
    let cut = WeightCut(c.weight_cut);
    let mut zeroed = parse_times(&c.zero_times)?;
    let (r, g, source) = if let Some(name) = &c.example {
        let p = CatalogPoint::lookup(name)?;
        let r = p.realization()?;
        if c.zero_times.is_empty() {
            zeroed = p.zeroed_times();
        }
        let x = p.x(&r)?;
        (r, x.terms, "x")
    } else if let Some(path) = &c.x_file {
        let r = realization(&c.spec)?;
        let terms = parse_laurent(&read(path)?)
            .map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
        let x = XElement::new(&r, terms)?;
        (r, x.terms, "x")
    } else if let Some(path) = &c.gamma_file {
        let r = realization(&c.spec)?;
        let g = parse_laurent(&read(path)?)
            .map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
        if g.size() != r.m {
            return Err(CliError::Config(format!(
                "factor has {}x{} blocks, the realization is {}x{}",
                g.size(),
                g.size(),
                r.m,
                r.m
            )));
        }
        (r, g, "gamma")
    } else {
        return Err(CliError::Config("give --example, --x-file or --gamma-file".into()));
    };
    match c.method {
        Method::Sz => {
            let point = if source == "x" {
                Point::from_x(&XElement { terms: g })?
            } else {
                Point::from_factor(g)?
            };
            let opts = TauOptions {
                cut,
                zeroed_times: zeroed.clone(),
                certify: !c.no_certify,
            };
            let res = tau_sz(&r, &point, &opts)?;
            if c.require_exact && !res.exact {
                return Err(CliError::Computation(format!(
                    "the {}-th root is not an exact polynomial (first discrepancy at weight {})",
                    root_order(&res.kappa)?,
                    res.residual_weight.map_or("?".into(), |w| w.to_string())
                )));
            }
            if !res.exact && c.format == Format::Text {
                eprintln!("warning: tau is a series truncated at weight {}", cut.0);
            }
            match c.format {
                Format::Text => writeln!(out, "{}", res.tau)?,
                Format::Json => {
                    let support = res.support.as_ref().map(|s| {
                        s.iter().map(|p| p.frobenius_string()).collect::<Vec<_>>()
                    });
                    emit_json(
                        out,
                        &json!({
                            "method": "sz",
                            "weight_cut": cut.0,
                            "zeroed_times": zeroed.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                            "kappa": format_rational(&res.kappa),
                            "exact": res.exact,
                            "certified": !c.no_certify,
                            "residual_weight": res.residual_weight,
                            "full_weight": res.full_weight,
                            "support": support,
                            "tau": res.tau.to_string(),
                            "tau_power": res.tau_power.to_string(),
                        }),
                    )?;
                }
            }
        }
        Method::Toeplitz => {
            let n_max = c.n_max.unwrap_or_else(|| default_n_max(&r, cut));
            let point = if source == "x" { Some(Point::from_x(&XElement { terms: g.clone() })?) } else { None };
            let factor = point.as_ref().map_or(&g, |p| &p.g);
            let st = stabilization_check(&r, factor, cut, &zeroed, n_max)?;
            let Some(limit) = st.limit().cloned() else {
                return Err(CliError::Computation(format!(
                    "Toeplitz determinants did not stabilize within N <= {n_max}"
                )));
            };
            let k = root_order(&r.kappa)?;
            let root = series_root(&limit, k, cut)?;
            if c.require_exact && !root.exact {
                return Err(CliError::Computation(format!(
                    "the {k}-th root of the stable determinant is not exact at weight {}",
                    root.residual_weight.map_or("?".into(), |w| w.to_string())
                )));
            }
            let support = match &point {
                Some(p) => plucker_support(&p.affine())?,
                None => None,
            };
            match c.format {
                Format::Text => writeln!(out, "{}", root.value)?,
                Format::Json => emit_json(
                    out,
                    &json!({
                        "method": "toeplitz",
                        "weight_cut": cut.0,
                        "zeroed_times": zeroed.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "kappa": format_rational(&r.kappa),
                        "root_exact_at_cut": root.exact,
                        "n0": st.n0,
                        "support": support.map(|s| s.iter().map(|p| p.frobenius_string()).collect::<Vec<_>>()),
                        "tau": root.value.to_string(),
                        "tau_power": limit.to_string(),
                    }),
                )?,
            }
        }
    }
    Ok(())
}

fn corpus(specs: &[String]) -> CliResult<Vec<CorpusEntry>> {
    specs
        .iter()
        .map(|s| {
            let (name, p, valid) = corpus_item(s)?;
            Ok(match valid {
                Some(w) => CorpusEntry::truncated(name, p, WeightCut(w)),
                None => CorpusEntry::exact(name, p),
            })
        })
        .collect()
}

/// Residual of `eq` on `entry`, restricted to the weights an entry exact
/// through `W` determines for an equation of degree `d`.
fn residual_on(eq: &HirotaPoly, entry: &CorpusEntry, degree: u32) -> Poly {
    let r = verify_equation(eq, &entry.tau);
    match entry.valid_weight {
        None => r,
        Some(w) if w >= degree => r.truncate(WeightCut(w - degree)),
        Some(_) => Poly::zero(),
    }
}

fn fit(c: FitCmd, out: &mut dyn Write) -> CliResult<()> {
    let entries = corpus(&c.corpus)?;
    let times = parse_times(&c.times)?;
    let opts = AnsatzOptions {
        include_constant: c.include_constant,
        even_only: !c.include_odd,
    };
    let mut monos = ansatz_basis(c.degree_bound, &times, opts);
    if c.homogeneous {
        monos.retain(|m| m.degree() == c.degree_bound);
    }
    if monos.is_empty() {
        return Err(CliError::Config("the ansatz is empty".into()));
    }
    let space = fit_equations(&entries, &monos);
    let mut checks = Vec::new();
    for eq in &space.basis {
        for e in &entries {
            let res = residual_on(eq, e, space.degree_bound);
            checks.push((eq.to_string(), e.name.clone(), res.is_zero()));
        }
    }
    match c.report {
        Format::Text => {
            writeln!(out, "ansatz {} monomials, degree <= {}", space.monomials.len(), space.degree_bound)?;
            for (d, n) in &space.filtration {
                writeln!(out, "dim(<= {d}) = {n}")?;
            }
            for eq in &space.basis {
                writeln!(out, "{eq}")?;
            }
        }
        Format::Json => {
            let filtration: Vec<Value> = space
                .filtration
                .iter()
                .map(|(d, n)| json!({"degree": d, "dimension": n}))
                .collect();
            let checks_json: Vec<Value> = checks
                .iter()
                .map(|(eq, name, ok)| json!({"equation": eq, "tau": name, "zero": ok}))
                .collect();
            emit_json(
                out,
                &json!({
                    "degree_bound": space.degree_bound,
                    "times": times.iter().map(|t| t.label()).collect::<Vec<_>>(),
                    "monomials": space.monomials.len(),
                    "dimension": space.dimension(),
                    "filtration": filtration,
                    "basis": space.basis.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "residual_checks": checks_json,
                }),
            )?;
        }
    }
    if let Some((eq, name, _)) = checks.iter().find(|(_, _, ok)| !ok) {
        return Err(CliError::Computation(format!(
            "fitted equation {eq} does not annihilate {name}"
        )));
    }
    Ok(())
}

fn parse_equation(s: &str) -> CliResult<HirotaPoly> {
    let text = golden::equation(s).unwrap_or(s);
    HirotaPoly::parse(text).map_err(|e| {
        let names = golden::equation_names().join(", ");
        CliError::from(e).context(&format!("equation `{s}` (bundled names: {names})"))
    })
}

fn verify(c: VerifyCmd, out: &mut dyn Write) -> CliResult<()> {
    let eq = parse_equation(&c.equation)?;
    let degree = eq.max_degree().unwrap_or(0);
    let entries = corpus(&c.tau)?;
    let results: Vec<(String, Poly)> = entries
        .iter()
        .map(|e| (e.name.clone(), residual_on(&eq, e, degree)))
        .collect();
    match c.format {
        Format::Text => {
            writeln!(out, "equation {eq}")?;
            for (name, r) in &results {
                writeln!(out, "{name}: residual {r}")?;
            }
        }
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|(n, r)| json!({"tau": n, "residual": r.to_string(), "zero": r.is_zero()}))
                .collect();
            emit_json(out, &json!({"equation": eq.to_string(), "results": items}))?;
        }
    }
    if let Some((name, _)) = results.iter().find(|(_, r)| !r.is_zero()) {
        return Err(CliError::Computation(format!("{eq} does not annihilate {name}")));
    }
    Ok(())
}

const KDV_POINTS: [&str; 4] = ["a1-f1", "a1-e1", "a1-f2", "a1-e2"];

fn kdv_tau(k: u32) -> CliResult<Poly> {
    if k == 0 {
        return Ok(Poly::one());
    }
    let name = KDV_POINTS.get(k as usize - 1).ok_or_else(|| {
        CliError::Config(format!("no bundled KdV tau function for k = {k}; pass --tau"))
    })?;
    let p = CatalogPoint::lookup(name)?;
    let r = p.realization()?;
    let point = Point::from_x(&p.x(&r)?)?;
    Ok(tau_sz(&r, &point, &TauOptions::default())?.tau)
}

fn adler_moser_cmd(c: AdlerMoserCmd, out: &mut dyn Write) -> CliResult<()> {
    let form = match c.form {
        Form::Wronskian => Recursion::Wronskian,
        Form::Sum => Recursion::Sum,
    };
    match c.emit {
        Emit::Theta => {
            let th = adler_moser(c.k, form)?;
            let residuals: Vec<Poly> = th
                .windows(3)
                .map(|w| residual(form, w[1].k, &w[2].poly, &w[1].poly, &w[0].poly))
                .collect();
            if let Some(i) = residuals.iter().position(|r| !r.is_zero()) {
                return Err(CliError::Computation(format!(
                    "recursion residual at k = {} is {}",
                    i + 1,
                    residuals[i]
                )));
            }
            match c.format {
                Format::Text => {
                    for t in &th {
                        writeln!(out, "theta{} = {}", t.k, t.poly)?;
                    }
                }
                Format::Json => {
                    let items: Vec<Value> =
                        th.iter().map(|t| json!({"k": t.k, "theta": t.poly.to_string()})).collect();
                    emit_json(out, &Value::Array(items))?;
                }
            }
        }
        Emit::Substitution => {
            let mut map = vec![(1, Poly::t(1))];
            if c.k >= 2 {
                map.extend(q_to_t(c.k)?);
            }
            match c.format {
                Format::Text => {
                    writeln!(out, "x = t1")?;
                    for (l, p) in map.iter().skip(1) {
                        writeln!(out, "q{l} = {p}")?;
                    }
                }
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("x".into(), Value::String("t1".into()));
                    for (l, p) in map.iter().skip(1) {
                        obj.insert(format!("q{l}"), Value::String(p.to_string()));
                    }
                    emit_json(out, &Value::Object(obj))?;
                }
            }
        }
        Emit::Match => {
            if form == Recursion::Sum {
                return Err(CliError::Config("--emit match uses the Wronskian form".into()));
            }
            let tau = match &c.tau {
                Some(p) => read_poly(p)?,
                None => kdv_tau(c.k)?,
            };
            let rep = match_kdv(c.k, &tau)?;
            match c.format {
                Format::Text => writeln!(out, "{}", rep.summary())?,
                Format::Json => {
                    let pairs = |v: &[(u32, dstau::Rational)]| -> Value {
                        v.iter().map(|(l, r)| (l.to_string(), Value::String(format_rational(r)))).collect::<serde_json::Map<_, _>>().into()
                    };
                    emit_json(
                        out,
                        &json!({
                            "k": rep.k,
                            "matched": rep.matched,
                            "scale": rep.scale.as_ref().map(format_rational),
                            "time_scales": pairs(&rep.time_scales),
                            "shifts": pairs(&rep.shifts),
                            "reason": rep.reason,
                        }),
                    )?;
                }
            }
        }
    }
    Ok(())
}

pub struct TableEntry {
    pub algebra: String,
    pub partition: String,
    pub want: Poly,
}

pub fn table_entries(text: &str) -> CliResult<Vec<TableEntry>> {
    golden::rows(text)
        .map(|(line, r)| {
            if r.len() != 3 {
                return Err(CliError::Parse(format!("table line {line}: expected 3 tab-separated fields")));
            }
            let want = Poly::parse(r[2])
                .map_err(|e| CliError::from(e).context(&format!("table line {line}")))?;
            Ok(TableEntry {
                algebra: r[0].to_string(),
                partition: r[1].to_string(),
                want,
            })
        })
        .collect()
}

fn table1(c: Table1Cmd, out: &mut dyn Write) -> CliResult<()> {
    let text = match &c.golden {
        Some(p) => read(p)?,
        None => golden::TABLE1.to_string(),
    };
    let entries = table_entries(&text)?;
    let mut cache: Vec<(String, Realization)> = Vec::new();
    let mut bad = Vec::new();
    for e in &entries {
        if !cache.iter().any(|(n, _)| *n == e.algebra) {
            let spec = AlgebraSpec {
                algebra: Some(e.algebra.clone()),
                rank: None,
                realization: None,
            };
            cache.push((e.algebra.clone(), realization(&spec)?));
        }
        let r = &cache.iter().find(|(n, _)| *n == e.algebra).expect("cached").1;
        let got = schur_nu(r, &Partition::parse(&e.partition)?)?;
        writeln!(out, "{}\t{}\t{}", e.algebra, e.partition, got)?;
        if got != e.want {
            bad.push(format!("{} {}: computed {got}, table has {}", e.algebra, e.partition, e.want));
        }
    }
    eprintln!("{} of {} entries match", entries.len() - bad.len(), entries.len());
    if !bad.is_empty() {
        return Err(CliError::Computation(bad.join("\n")));
    }
    Ok(())
}
