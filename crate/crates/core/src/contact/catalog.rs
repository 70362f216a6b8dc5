//! Named generators: the built-in point and contact symmetries plus
//! generators derived from them by recursion.

use std::fmt;
use std::io::{BufRead, Write};

use indexmap::IndexMap;

use crate::symkernel::ContactExpr;

use super::bracket::Operator;
use super::jet::JetFunction;
use super::ContactError;

/// `phi12` exactly as printed. Its leading numerator should read
/// `p^4 - 6*p^2 + 1`; with `+ 6` the expression is not a solution.
pub const PHI12_AS_PRINTED: &str = "(p^4 - 6*p^2 + 6)/(1+p^2)^4*q^5 \
    + (11*p^6 - 49*p^4 - 51*p^2 + 9)/(6*(1+p^2)^4)*q^3 \
    + (2*p^8 - 3*p^6 - 11*p^4 - 5*p^2 + 1)/(2*(1+p^2)^4)*q";

const BUILTIN: &[(&str, &str)] = &[
    ("phi1", "1"),
    ("phi2_1", "p"),
    ("phi2_2", "q"),
    ("phi3_12", "y*p - x*q"),
    ("phi3_1", "x + u*p"),
    ("phi3_2", "y + u*q"),
    ("phi4", "u - x*p - y*q"),
    ("phi5", "q*atan(p)"),
    ("phi6", "p*q^2/(1+p^2) + atan(p)"),
    ("phi7", "q^2/(1+p^2) - p*atan(p)"),
    ("phi8", "p*q^3/(1+p^2)^2 + 3/2*p*q/(1+p^2)"),
    ("phi9", "(p^2 - 1)/(1+p^2)^2*q^3 - 3*q/(1+p^2)"),
    (
        "phi10",
        "(p^3 - 3*p)/(1+p^2)^3*q^4 + 3/2*(p^5 - 2*p^3 - 3*p)/(1+p^2)^3*q^2 - 3/2*p/(1+p^2)",
    ),
    (
        "phi11",
        "(3*p^2 - 1)/(1+p^2)^3*q^4 + 3/2*(3*p^4 + 2*p^2 - 1)/(1+p^2)^3*q^2 + 3/2*p^2/(1+p^2)",
    ),
    (
        "phi12",
        "(p^4 - 6*p^2 + 1)/(1+p^2)^4*q^5 \
         + (11*p^6 - 49*p^4 - 51*p^2 + 9)/(6*(1+p^2)^4)*q^3 \
         + (2*p^8 - 3*p^6 - 11*p^4 - 5*p^2 + 1)/(2*(1+p^2)^4)*q",
    ),
    (
        "phi13",
        "(p^3 - p)/(1+p^2)^4*q^5 \
         + (21*p^5 + 2*p^3 - 19*p)/(12*(1+p^2)^4)*q^3 \
         + (3*p^7 + 4*p^5 - p^3 - 2*p)/(4*(1+p^2)^4)*q",
    ),
];

/// Names of the built-in generators, in catalog order.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

/// The twelve built-in generators depending on `(p, q)` only.
pub const H_BUILTIN: [&str; 12] = [
    "phi1", "phi2_1", "phi2_2", "phi5", "phi6", "phi7", "phi8", "phi9", "phi10", "phi11", "phi12", "phi13",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Given,
    /// Given formula corrected from the printed text it replaces.
    Corrected { printed: String },
    Derived { seed: String, ops: Vec<Operator> },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Given => f.write_str("given"),
            Provenance::Corrected { printed } => write!(f, "corrected:{printed}"),
            Provenance::Derived { seed, ops } => {
                let ops: Vec<_> = ops.iter().map(Operator::name).collect();
                write!(f, "derived:{seed}:{}", ops.join("-"))
            }
        }
    }
}

impl Provenance {
    fn parse(text: &str) -> Option<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "given" if rest.is_empty() => Some(Provenance::Given),
            "corrected" => Some(Provenance::Corrected { printed: rest.to_string() }),
            "derived" => {
                let (seed, ops) = rest.split_once(':')?;
                let ops = ops.split('-').map(|o| o.parse().ok()).collect::<Option<Vec<_>>>()?;
                Some(Provenance::Derived { seed: seed.to_string(), ops })
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub generator: JetFunction,
    pub provenance: Provenance,
    /// `Some(zero residual?)` for `(p, q)`-only generators; `None` for point
    /// generators, to which the residual does not apply.
    pub residual_verified: Option<bool>,
}

impl CatalogEntry {
    pub fn contact(&self) -> Option<ContactExpr> {
        self.generator.as_contact()
    }
}

/// Ordered table of generators. Reads are shared; registration takes
/// `&mut self`, so writers are serialized by the borrow checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCatalog {
    entries: IndexMap<String, CatalogEntry>,
}

pub const MANIFEST_HEADER: &str = "# minsurf catalog manifest v1";
const MANIFEST_COLUMNS: &str = "name\texpression\tprovenance\tresidual_verified";

impl GeneratorCatalog {
    pub fn empty() -> Self {
        Self { entries: IndexMap::new() }
    }

    /// The built-in generators; every `(p, q)`-only entry is checked to be a
    /// solution.
    pub fn builtin() -> Self {
        let mut catalog = Self::empty();
        for (name, text) in BUILTIN {
            let generator = JetFunction::parse(text).expect("built-in generator parses");
            let provenance = if *name == "phi12" {
                Provenance::Corrected { printed: PHI12_AS_PRINTED.to_string() }
            } else {
                Provenance::Given
            };
            let residual_verified = generator.as_contact().map(|e| e.is_solution());
            assert_ne!(residual_verified, Some(false), "built-in {name} must solve the linearised equation");
            catalog.entries.insert(
                name.to_string(),
                CatalogEntry { name: name.to_string(), generator, provenance, residual_verified },
            );
        }
        catalog
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, ContactError> {
        self.entries.get(name).ok_or_else(|| ContactError::UnknownName {
            name: name.to_string(),
            available: self.names().collect::<Vec<_>>().join(", "),
        })
    }

    pub fn get(&self, name: &str) -> Result<&JetFunction, ContactError> {
        self.entry(name).map(|e| &e.generator)
    }

    /// The generator as a `(p, q)`-only expression; errors for point generators.
    pub fn get_contact(&self, name: &str) -> Result<ContactExpr, ContactError> {
        self.entry(name)?
            .contact()
            .ok_or_else(|| ContactError::NotInSubalgebra(name.to_string()))
    }

    /// Every `(p, q)`-only entry, in catalog order.
    pub fn h_members(&self) -> Vec<(&str, ContactExpr)> {
        self.entries
            .values()
            .filter_map(|e| e.contact().map(|c| (e.name.as_str(), c)))
            .collect()
    }

    /// Adds a derived solution. Re-registering an identical entry is a no-op.
    pub fn register(&mut self, name: &str, expr: ContactExpr, provenance: Provenance) -> Result<(), ContactError> {
        if !expr.is_solution() {
            return Err(ContactError::ResidualNonzero { name: name.to_string(), residual: expr.pde_residual().to_string() });
        }
        let generator = JetFunction::from_contact(expr);
        if let Some(existing) = self.entries.get(name) {
            if existing.generator == generator {
                return Ok(());
            }
            return Err(ContactError::NameConflict(name.to_string()));
        }
        self.entries.insert(
            name.to_string(),
            CatalogEntry { name: name.to_string(), generator, provenance, residual_verified: Some(true) },
        );
        Ok(())
    }

    /// Applies `ops` left to right starting at `seed`, checking the residual
    /// after every step. Stops at the first zero generator. Results are named
    /// `gen_<seed>_<op-op-...>_<k>` and registered when `register` is set.
    pub fn proliferate(
        &mut self,
        seed: &str,
        ops: &[Operator],
        register: bool,
    ) -> Result<Vec<(String, ContactExpr)>, ContactError> {
        let mut current = self.get_contact(seed)?;
        let op_tag: Vec<_> = ops.iter().map(Operator::name).collect();
        let op_tag = op_tag.join("-");
        let mut out = Vec::with_capacity(ops.len());
        for (k, op) in ops.iter().enumerate() {
            current = op.apply(&current);
            let name = format!("gen_{seed}_{op_tag}_{}", k + 1);
            let residual = current.pde_residual();
            if !residual.is_zero() {
                return Err(ContactError::ResidualNonzero { name, residual: residual.to_string() });
            }
            out.push((name.clone(), current.clone()));
            if current.is_zero() {
                break;
            }
            if register {
                let provenance = Provenance::Derived { seed: seed.to_string(), ops: ops[..=k].to_vec() };
                self.register(&name, current.clone(), provenance)?;
            }
        }
        Ok(out)
    }

    pub fn write_manifest<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{MANIFEST_HEADER}")?;
        writeln!(w, "{MANIFEST_COLUMNS}")?;
        for e in self.entries.values() {
            let flag = match e.residual_verified {
                Some(true) => "yes",
                Some(false) => "no",
                None => "n/a",
            };
            writeln!(w, "{}\t{}\t{}\t{}", e.name, e.generator, e.provenance, flag)?;
        }
        Ok(())
    }

    pub fn to_manifest_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_manifest(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("manifest is UTF-8")
    }

    /// Reads a manifest written by [`GeneratorCatalog::write_manifest`],
    /// recomputing every residual flag.
    pub fn read_manifest<R: BufRead>(r: R) -> Result<Self, ContactError> {
        let bad = |line: usize, msg: String| ContactError::Manifest { line, message: msg };
        let mut lines = r.lines().enumerate();
        let mut next = |expect: &str| -> Result<(), ContactError> {
            match lines.next() {
                Some((_, Ok(l))) if l == expect => Ok(()),
                Some((i, Ok(l))) => Err(bad(i + 1, format!("expected '{expect}', found '{l}'"))),
                Some((i, Err(e))) => Err(bad(i + 1, e.to_string())),
                None => Err(bad(0, "empty manifest".into())),
            }
        };
        next(MANIFEST_HEADER)?;
        next(MANIFEST_COLUMNS)?;
        let mut catalog = Self::empty();
        for (i, line) in lines {
            let lineno = i + 1;
            let line = line.map_err(|e| bad(lineno, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [name, expr, provenance, flag] = fields[..] else {
                return Err(bad(lineno, format!("expected 4 tab-separated fields, found {}", fields.len())));
            };
            let generator = JetFunction::parse(expr).map_err(|e| bad(lineno, format!("{name}: {e}")))?;
            let provenance =
                Provenance::parse(provenance).ok_or_else(|| bad(lineno, format!("bad provenance '{provenance}'")))?;
            let residual_verified = generator.as_contact().map(|e| e.is_solution());
            let recorded = match flag {
                "yes" => Some(true),
                "no" => Some(false),
                "n/a" => None,
                other => return Err(bad(lineno, format!("bad residual flag '{other}'"))),
            };
            if recorded != residual_verified {
                return Err(bad(lineno, format!("{name}: recorded residual flag '{flag}' does not match recomputation")));
            }
            if catalog.entries.contains_key(name) {
                return Err(bad(lineno, format!("duplicate name '{name}'")));
            }
            catalog.entries.insert(
                name.to_string(),
                CatalogEntry { name: name.to_string(), generator, provenance, residual_verified },
            );
        }
        Ok(catalog)
    }
}

impl Default for GeneratorCatalog {
    fn default() -> Self {
        Self::builtin()
    }
}
