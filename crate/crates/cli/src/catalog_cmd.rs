use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use anyhow::Context;
use minsurf::contact::{
    jacobi_bracket, verify_prop3, ContactError, GeneratorCatalog, JetFunction, Operator, Provenance,
};
use minsurf::ContactExpr;

use crate::config::RunConfig;
use crate::{CmdResult, Failure};

/// Manifest contents when the file exists, the built-in catalog otherwise.
pub fn load_catalog(cfg: &RunConfig) -> Result<GeneratorCatalog, Failure> {
    let path = &cfg.manifest;
    if !path.exists() {
        return Ok(GeneratorCatalog::builtin());
    }
    let file = File::open(path)
        .with_context(|| format!("opening manifest {}", path.display()))
        .map_err(Failure::Runtime)?;
    GeneratorCatalog::read_manifest(BufReader::new(file))
        .with_context(|| format!("reading manifest {}", path.display()))
        .map_err(Failure::Runtime)
}

fn contact_failure(e: ContactError) -> Failure {
    match e {
        ContactError::UnknownName { .. }
        | ContactError::UnknownOperator(_)
        | ContactError::NotInSubalgebra(_)
        | ContactError::Parse(_) => Failure::Usage(e.into()),
        ContactError::ResidualNonzero { .. } => Failure::Verification(format!("internal consistency failure: {e}")),
        _ => Failure::Runtime(e.into()),
    }
}

fn is_identifier(text: &str) -> bool {
    text.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A catalog name, or else an expression in the jet grammar.
pub fn resolve(cat: &GeneratorCatalog, text: &str) -> Result<(String, JetFunction), Failure> {
    if let Ok(g) = cat.get(text) {
        return Ok((text.to_string(), g.clone()));
    }
    match JetFunction::parse(text) {
        Ok(g) => Ok((text.to_string(), g)),
        Err(_) if is_identifier(text) => Err(contact_failure(cat.get(text).unwrap_err())),
        Err(e) => Err(Failure::usage(format!("'{text}' is neither a catalog name nor a valid expression: {e}"))),
    }
}

/// Expands `a..b` over catalog order; other arguments pass through.
fn expand(cat: &GeneratorCatalog, args: &[String]) -> Result<Vec<String>, Failure> {
    let names: Vec<&str> = cat.names().collect();
    let index = |n: &str| {
        names.iter().position(|m| *m == n).ok_or_else(|| contact_failure(cat.get(n).unwrap_err()))
    };
    let mut out = Vec::new();
    for arg in args {
        match arg.split_once("..") {
            Some((a, b)) if is_identifier(a) && is_identifier(b) => {
                let (i, j) = (index(a)?, index(b)?);
                if i > j {
                    return Err(Failure::usage(format!("empty range {arg}")));
                }
                out.extend(names[i..=j].iter().map(|n| n.to_string()));
            }
            _ => out.push(arg.clone()),
        }
    }
    Ok(out)
}

fn provenance_label(p: &Provenance) -> String {
    match p {
        Provenance::Corrected { .. } => "corrected".to_string(),
        other => other.to_string(),
    }
}

pub fn list(cfg: &RunConfig, filter: Option<&str>) -> CmdResult {
    let cat = load_catalog(cfg)?;
    let rows: Vec<_> = cat.entries().filter(|e| filter.is_none_or(|f| e.name.contains(f))).collect();
    let width = rows.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
    println!("{:<width$}  {:<28}  {:<8}  expression", "name", "provenance", "residual");
    for e in rows {
        let residual = match e.residual_verified {
            Some(true) => "zero",
            Some(false) => "NONZERO",
            None => "n/a",
        };
        println!("{:<width$}  {:<28}  {:<8}  {}", e.name, provenance_label(&e.provenance), residual, e.generator);
    }
    Ok(())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

/// Residual and closed-form bracket checks for a `(p, q)`-only generator.
fn verify_contact(label: &str, x: &ContactExpr) -> bool {
    let residual = x.pde_residual();
    let report = verify_prop3(x);
    let checks: Vec<String> = report.checks.iter().map(|c| format!("{} {}", c.operator, mark(c.holds))).collect();
    let ok = residual.is_zero() && report.all_hold();
    println!("{label}: residual {residual} [{}]; brackets: {}", mark(residual.is_zero()), checks.join(", "));
    ok
}

/// Brackets of a point generator with every `(p, q)`-only catalog member must
/// land back among the solutions, matching the closed form where one exists.
fn verify_point(label: &str, g: &JetFunction, cat: &GeneratorCatalog) -> bool {
    let operator = Operator::ALL.into_iter().find(|op| op.source() == *g);
    let members = cat.h_members();
    let mut failures = Vec::new();
    for (name, x) in &members {
        let ok = match jacobi_bracket(g, &JetFunction::from_contact(x.clone())) {
            Ok(b) => match b.as_contact() {
                Some(c) => c.is_solution() && operator.is_none_or(|op| op.apply(x) == c),
                None => false,
            },
            Err(_) => false,
        };
        if !ok {
            failures.push(*name);
        }
    }
    let against = match operator {
        Some(op) => format!("closed form {op}"),
        None => "solution closure".to_string(),
    };
    println!(
        "{label}: brackets with {} solutions, {against}: {} of {} [{}]",
        members.len(),
        members.len() - failures.len(),
        members.len(),
        mark(failures.is_empty())
    );
    if !failures.is_empty() {
        println!("  failing: {}", failures.join(", "));
    }
    failures.is_empty()
}

pub fn verify(cfg: &RunConfig, args: &[String]) -> CmdResult {
    let cat = load_catalog(cfg)?;
    let targets = expand(&cat, args)?
        .iter()
        .map(|t| resolve(&cat, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut failed = 0usize;
    let mut contacts = Vec::new();
    for (label, g) in &targets {
        let ok = match g.as_contact() {
            Some(x) => {
                contacts.push((label.as_str(), x.clone()));
                verify_contact(label, &x)
            }
            None => verify_point(label, g, &cat),
        };
        failed += usize::from(!ok);
    }
    if contacts.len() > 1 {
        let mut pairs = 0;
        let mut bad = Vec::new();
        for (i, (a, x)) in contacts.iter().enumerate() {
            for (b, y) in &contacts[i + 1..] {
                pairs += 1;
                let b_xy = jacobi_bracket(&x.clone().into(), &y.clone().into());
                if !b_xy.is_ok_and(|r| r.is_zero()) {
                    bad.push(format!("{{{a}, {b}}}"));
                }
            }
        }
        println!("pairwise brackets: {} of {pairs} vanish [{}]", pairs - bad.len(), mark(bad.is_empty()));
        if !bad.is_empty() {
            println!("  nonzero: {}", bad.join(", "));
            failed += 1;
        }
    }
    if failed == 0 {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(Failure::Verification(format!("verify: {failed} check group(s) failed")))
    }
}

fn parse_ops(args: &[String]) -> Result<Vec<Operator>, Failure> {
    args.iter()
        .flat_map(|a| a.split([',', '-']))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Operator>().map_err(contact_failure))
        .collect()
}

pub fn derive(cfg: &RunConfig, seed: &str, op_args: &[String], register: bool) -> CmdResult {
    let ops = parse_ops(op_args)?;
    if ops.is_empty() {
        return Err(Failure::usage("no operators given"));
    }
    let mut cat = load_catalog(cfg)?;
    let before = cat.len();
    let known = cat.clone();
    let results = cat.proliferate(seed, &ops, register).map_err(contact_failure)?;
    for (name, x) in &results {
        let same = known.h_members().into_iter().find(|(_, y)| y == x).map(|(n, _)| n.to_string());
        match same {
            _ if x.is_zero() => println!("{name} = 0 (zero generator; sequence stops)"),
            Some(n) if n != *name => println!("{name} = {x}  (= {n})"),
            _ => println!("{name} = {x}"),
        }
    }
    if register {
        let path = &cfg.manifest;
        let write = || -> anyhow::Result<()> {
            let mut w = BufWriter::new(File::create(path)?);
            cat.write_manifest(&mut w)?;
            w.flush()?;
            Ok(())
        };
        write()
            .with_context(|| format!("writing manifest {}", path.display()))
            .map_err(Failure::Runtime)?;
        println!("registered {} new generator(s) in {}", cat.len() - before, path.display());
    }
    Ok(())
}
