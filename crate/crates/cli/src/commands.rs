use std::time::Instant;

use hochcurve::bar::{xn_cohomology_capped, BarComplex};
use hochcurve::koszul::{
    graded_cohomology, harrison_1_2, hkr_cohomology_complex, hkr_homology_complex, CompleteIntersection,
    GradedDimensionTable,
};
use hochcurve::poly::{parse_polynomial, Monomial, QuotientAlgebra};
use hochcurve::starprod::{
    harr2_representatives, miniversal_family, triviality_solve, verify_obstruction_vanishing, DeformedRelation,
    StarProduct, TrivialityOutcome,
};
use hochcurve::symgroup::{eulerian_idempotents_capped, GroupAlgebraElement};
use hochcurve::{Algebra, Poly, Rational};

use crate::args::{AlgebraSpec, Caps, Command, JobConfig};
use crate::report::{Report, Table};
use crate::{check, golden, CliError};

/// Random triples used by the associativity flag of `star`.
const STAR_SAMPLES: usize = 20;
const STAR_SAMPLE_DEGREE: u64 = 4;
/// Largest `n` for which `idempotents` re-verifies the idempotent laws.
const VERIFY_IDEMPOTENTS_UP_TO: usize = 6;

fn poly(flag: &str, src: &str, vars: &[String]) -> Result<Poly, CliError> {
    parse_polynomial(src, vars)
        .map_err(|error| CliError::Parse { flag: flag.into(), source_text: src.into(), error })
}

fn relations(spec: &AlgebraSpec) -> Result<Vec<Poly>, CliError> {
    spec.relations.iter().map(|r| poly("--relations", r, &spec.vars)).collect()
}

fn algebra(spec: &AlgebraSpec) -> Result<Algebra, CliError> {
    let rels = relations(spec)?;
    match &spec.weights {
        Some(w) => QuotientAlgebra::with_weights(spec.vars.clone(), rels, w.clone()),
        None => QuotientAlgebra::new(spec.vars.clone(), rels),
    }
    .map_err(CliError::domain("building the quotient algebra"))
}

fn complete_intersection(spec: &AlgebraSpec) -> Result<CompleteIntersection<Rational>, CliError> {
    let rels = relations(spec)?;
    match &spec.weights {
        Some(w) => CompleteIntersection::with_weights(spec.vars.clone(), rels, w.clone()),
        None => CompleteIntersection::new(spec.vars.clone(), rels),
    }
    .map_err(CliError::domain("building the complete intersection"))
}

fn mono(m: &Monomial, vars: &[String]) -> String {
    m.display(vars).to_string()
}

fn joined(v: impl IntoIterator<Item = impl ToString>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs a validated config.
pub fn run(config: JobConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = Report::new(config.clone());
    let caps = config.caps;
    match &config.command {
        Command::Idempotents { n } => idempotents(&mut report, *n, caps)?,
        Command::BarHomology { algebra: spec, p_max, max_degree, hodge } => {
            bar_homology(&mut report, spec, *p_max, *max_degree, *hodge, caps)?
        }
        Command::XnCohomology { n, p_max } => xn(&mut report, *n, *p_max, caps)?,
        Command::HkrCohomology { algebra: spec, p_max, cutoff } => {
            let c = complete_intersection(spec)?;
            let t = graded_cohomology(&hkr_cohomology_complex(&c, *p_max), *cutoff)
                .map_err(CliError::domain("Koszul cohomology"))?;
            dimension_tables(&mut report, &t);
        }
        Command::HkrHomology { algebra: spec, p_max, cutoff } => {
            let c = complete_intersection(spec)?;
            let t = graded_cohomology(&hkr_homology_complex(&c, *p_max), *cutoff)
                .map_err(CliError::domain("Koszul homology"))?;
            dimension_tables(&mut report, &t);
        }
        Command::Tjurina { algebra: spec, cutoff } => tjurina(&mut report, spec, *cutoff)?,
        Command::Star { algebra: spec, corrections, order, eval, table_degree } => {
            star(&mut report, spec, corrections, *order, eval.as_ref(), *table_degree, config.seed)?
        }
        Command::Trivial { algebra: spec, q1, degree_bound } => trivial(&mut report, spec, q1, *degree_bound)?,
        Command::Miniversal { algebra: spec } => miniversal(&mut report, spec)?,
        Command::Check { samples } => {
            let t = check::run_suite(*samples, config.seed);
            let passed = t.rows.iter().all(|r| r[1] == "PASS");
            report.tables.push(t);
            report.flags.insert("passed".into(), passed);
        }
        Command::Golden { dir, bless } => {
            let t = golden::run_corpus(dir.as_ref(), *bless)?;
            let passed = t.rows.iter().all(|r| r[1] != "FAIL");
            report.tables.push(t);
            report.flags.insert("passed".into(), passed);
        }
    }
    if config.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn idempotents(report: &mut Report, n: usize, caps: Caps) -> Result<(), CliError> {
    let e = eulerian_idempotents_capped::<Rational>(n, caps.max_idempotent_n)
        .map_err(CliError::domain("Eulerian idempotents"))?;
    let mut t = Table::new("idempotents", &["k", "permutation", "coefficient"]);
    for (k, ek) in e.iter().enumerate() {
        for (p, c) in ek.terms() {
            t.push(vec![(k + 1).to_string(), p.to_string(), c.to_string()]);
        }
    }
    report.tables.push(t);
    report.summary.insert("n".into(), n.to_string());
    if n <= VERIFY_IDEMPOTENTS_UP_TO {
        let mut idempotent = true;
        let mut orthogonal = true;
        let mut sum = GroupAlgebraElement::zero(n);
        for (k, ek) in e.iter().enumerate() {
            sum = sum.add(ek);
            for (l, el) in e.iter().enumerate() {
                let prod = ek.mul(el);
                if k == l {
                    idempotent &= prod == *ek;
                } else {
                    orthogonal &= prod.is_zero();
                }
            }
        }
        report.flags.insert("idempotent".into(), idempotent);
        report.flags.insert("orthogonal".into(), orthogonal);
        report.flags.insert("sum_is_identity".into(), sum == GroupAlgebraElement::identity(n));
    }
    Ok(())
}

fn bar_homology(
    report: &mut Report,
    spec: &AlgebraSpec,
    p_max: usize,
    max_degree: u64,
    hodge: bool,
    caps: Caps,
) -> Result<(), CliError> {
    let alg = algebra(spec)?;
    let h = BarComplex::with_caps(&alg, p_max, max_degree, caps.max_slice, caps.max_idempotent_n)
        .and_then(|cx| cx.homology(hodge))
        .map_err(CliError::domain("bar homology"))?;
    let bgs = h.bgs_by_degree();
    let split = |p: usize, d: Option<u64>| -> String {
        joined((1..=p).map(|k| match d {
            Some(d) => bgs.get(&(p, k, d)).copied().unwrap_or(0),
            None => h.bgs_total(p, k).unwrap_or(0),
        }))
    };
    let mut columns = vec!["p", "degree", "dim"];
    if hodge {
        columns.push("hodge");
    }
    let mut t = Table::new("homology", &columns);
    for (&(p, d), &dim) in &h.by_degree() {
        if dim == 0 || p > p_max {
            continue;
        }
        let mut row = vec![p.to_string(), d.to_string(), dim.to_string()];
        if hodge {
            row.push(split(p, Some(d)));
        }
        t.push(row);
    }
    report.tables.push(t);
    columns.remove(1);
    let mut totals = Table::new("totals", &columns);
    for p in 1..=p_max {
        let mut row = vec![p.to_string(), h.total(p).to_string()];
        if hodge {
            row.push(split(p, None));
        }
        totals.push(row);
    }
    report.tables.push(totals);
    report.summary.insert("weights".into(), joined(alg.weights()));
    Ok(())
}

fn xn(report: &mut Report, n: u32, p_max: usize, caps: Caps) -> Result<(), CliError> {
    let rows = xn_cohomology_capped(n, p_max, caps.max_slice).map_err(CliError::domain("z^n cochain cohomology"))?;
    let mut t = Table::new("cohomology", &["p", "dim", "hodge", "by_weight"]);
    for r in rows {
        let weights: Vec<String> = r.by_weight.iter().map(|(w, d)| format!("{w}:{d}")).collect();
        t.push(vec![r.p.to_string(), r.dim.to_string(), joined(&r.hodge), weights.join(" ")]);
    }
    report.tables.push(t);
    Ok(())
}

fn dimension_tables(report: &mut Report, t: &GradedDimensionTable) {
    let mut entries = Table::new("entries", &["p", "hodge", "internal", "dim", "stable"]);
    let mut columns = Table::new("columns", &["p", "hodge", "dim"]);
    let mut keys: Vec<(i32, usize)> = Vec::new();
    for e in &t.degrees {
        let internal = e.internal.map_or_else(|| "*".to_string(), |d| d.to_string());
        entries.push(vec![e.p.to_string(), e.hodge.to_string(), internal, e.dim.to_string(), e.stable.to_string()]);
        if keys.last() != Some(&(e.p, e.hodge)) {
            keys.push((e.p, e.hodge));
        }
    }
    keys.sort_unstable();
    keys.dedup();
    for (p, h) in keys {
        columns.push(vec![p.to_string(), h.to_string(), t.hodge_total(p, h).to_string()]);
    }
    report.tables.push(entries);
    report.tables.push(columns);
    report.summary.insert("cutoff".into(), t.cutoff.to_string());
    report.flags.insert("exact".into(), t.exact);
    report.flags.insert("stable".into(), t.degrees.iter().all(|e| e.stable));
}

fn tjurina(report: &mut Report, spec: &AlgebraSpec, cutoff: i64) -> Result<(), CliError> {
    let vars = &spec.vars;
    let mut basis = Table::new("basis", &["relation", "monomial", "total_degree"]);
    let mut series = Table::new("series", &["degree", "dim"]);
    let (dim, isolated) = if spec.relations.len() == 1 {
        let r = poly("--relations", &spec.relations[0], vars)?;
        let reps = harr2_representatives(vars, &r, cutoff as u64).map_err(CliError::domain("Tjurina algebra"))?;
        for m in reps.basis.iter().flatten() {
            basis.push(vec!["1".into(), mono(m, vars), m.total_degree().to_string()]);
        }
        for (d, k) in &reps.hilbert {
            series.push(vec![d.to_string(), k.to_string()]);
        }
        (reps.dim(), reps.basis.is_some())
    } else {
        let c = complete_intersection(spec)?;
        let h = harrison_1_2(&c, cutoff).map_err(CliError::domain("Harrison cokernel"))?;
        for (j, m) in h.cokernel_basis.iter().flatten() {
            basis.push(vec![(j + 1).to_string(), mono(m, vars), m.total_degree().to_string()]);
        }
        for (d, k) in &h.cokernel_series {
            series.push(vec![d.to_string(), k.to_string()]);
        }
        (h.cokernel_dim(), h.isolated)
    };
    report.tables.push(basis);
    report.tables.push(series);
    report.summary.insert("dim".into(), dim.map_or_else(|| "infinite".into(), |d| d.to_string()));
    report.flags.insert("isolated".into(), isolated);
    Ok(())
}

fn star(
    report: &mut Report,
    spec: &AlgebraSpec,
    corrections: &[String],
    order: usize,
    eval: Option<&(String, String)>,
    table_degree: u64,
    seed: u64,
) -> Result<(), CliError> {
    let vars = &spec.vars;
    let r = poly("--relation", &spec.relations[0], vars)?;
    let qs = corrections.iter().map(|q| poly("--q1", q, vars)).collect::<Result<Vec<_>, _>>()?;
    let rel = DeformedRelation::new(vars.clone(), r, qs, order).map_err(CliError::domain("deformed relation"))?;
    let sp = StarProduct::new(rel);
    for i in 1..=order {
        let table = sp.cochain_table(i, table_degree).map_err(CliError::domain(format!("C_{i} table")))?;
        let mut t = Table::new(&format!("C{i}"), &["f", "g", "value"]);
        for ((a, b), v) in &table {
            t.push(vec![mono(a, vars), mono(b, vars), v.display(vars).to_string()]);
        }
        report.tables.push(t);
    }
    if let Some((f, g)) = eval {
        let (pf, pg) = (poly("--eval", f, vars)?, poly("--eval", g, vars)?);
        let (f, g) = (sp.reduce(&pf), sp.reduce(&pg));
        let s = sp.star_multiply(&f, &g).map_err(CliError::domain("star product"))?;
        let mut t = Table::new("product", &["power", "coefficient"]);
        for (i, c) in s.coeffs.iter().enumerate() {
            t.push(vec![i.to_string(), c.display(vars).to_string()]);
        }
        report.tables.push(t);
        report.summary.insert("product".into(), s.display(vars).to_string());
    }
    report.summary.insert("y".into(), vars[sp.relation().y()].clone());
    report.summary.insert("relation".into(), sp.relation().relation().display(vars).to_string());
    match verify_obstruction_vanishing(&sp, order, STAR_SAMPLES, STAR_SAMPLE_DEGREE, seed) {
        Ok(_) => {
            report.flags.insert("associative".into(), true);
        }
        Err(e @ hochcurve::Error::AssociativityFailure { .. }) => {
            report.flags.insert("associative".into(), false);
            report.summary.insert("associativity".into(), e.to_string());
        }
        Err(e) => return Err(CliError::domain("associativity check")(e)),
    }
    Ok(())
}

fn trivial(report: &mut Report, spec: &AlgebraSpec, q1: &str, bound: Option<u64>) -> Result<(), CliError> {
    let vars = &spec.vars;
    let r = poly("--relation", &spec.relations[0], vars)?;
    let q = poly("--q1", q1, vars)?;
    let outcome = triviality_solve(vars, &r, &q, bound).map_err(CliError::domain("triviality"))?;
    let conclusive = !matches!(outcome, TrivialityOutcome::Inconclusive { .. });
    match outcome {
        TrivialityOutcome::Trivial(e) => {
            report.summary.insert("outcome".into(), "trivial".into());
            report.summary.insert("witness".into(), e.display(vars).to_string());
        }
        TrivialityOutcome::Obstructed(c) => {
            report.summary.insert("outcome".into(), "obstructed".into());
            report.summary.insert("class".into(), c.class.display(vars).to_string());
            if let Some(b) = &c.tjurina_basis {
                let mut t = Table::new("tjurina_basis", &["monomial"]);
                for m in b {
                    t.push(vec![mono(m, vars)]);
                }
                report.tables.push(t);
            }
        }
        TrivialityOutcome::Inconclusive { degree_bound, reason } => {
            report.summary.insert("outcome".into(), "inconclusive".into());
            report.summary.insert("degree_bound".into(), degree_bound.to_string());
            report.summary.insert("reason".into(), reason);
        }
    }
    report.flags.insert("conclusive".into(), conclusive);
    Ok(())
}

fn miniversal(report: &mut Report, spec: &AlgebraSpec) -> Result<(), CliError> {
    let c = complete_intersection(spec)?;
    let fam = miniversal_family(&c).map_err(CliError::domain("miniversal family"))?;
    let mut params = Table::new("parameters", &["parameter", "relation", "monomial"]);
    for (t, (j, m)) in fam.params.iter().zip(&fam.classes) {
        params.push(vec![t.clone(), (j + 1).to_string(), mono(m, &spec.vars)]);
    }
    let mut gens = Table::new("family", &["relation", "polynomial"]);
    for (j, g) in fam.display_generators().into_iter().enumerate() {
        gens.push(vec![(j + 1).to_string(), g]);
    }
    report.tables.push(params);
    report.tables.push(gens);
    report.summary.insert("dim".into(), fam.params.len().to_string());
    Ok(())
}
