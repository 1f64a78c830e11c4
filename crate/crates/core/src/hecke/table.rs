//! Externally supplied p-canonical bases, validated on ingestion.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{Hecke, HeckeElem};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lincomb::LinComb;
use crate::parabolic::{AsphElem, Parabolic, SphElem};
use crate::weyl::ExtElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prime {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Finite(p) => write!(f, "{p}"),
            Prime::Infinity => write!(f, "infinity"),
        }
    }
}

impl std::str::FromStr for Prime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Prime> {
        match s {
            "infinity" | "inf" => Ok(Prime::Infinity),
            _ => s
                .parse::<u64>()
                .ok()
                .filter(|&p| p >= 2)
                .map(Prime::Finite)
                .ok_or_else(|| Error::Parse(format!("bad prime {s:?}"))),
        }
    }
}

/// Which module the columns live in: `H_ext`, antispherical, spherical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    H,
    N,
    M,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::H => "H",
            BasisKind::N => "N",
            BasisKind::M => "M",
        }
    }
}

#[derive(Clone, Debug)]
pub enum TableSource {
    /// Columns are the Kazhdan–Lusztig basis, computed on demand.
    Builtin,
    Explicit(BTreeMap<ExtElem, LinComb<ExtElem>>),
}

#[derive(Clone)]
pub struct PCanonicalTable {
    p: Prime,
    basis: BasisKind,
    datum: String,
    source: TableSource,
    hecke: Arc<Hecke>,
    parabolic: Arc<Parabolic>,
}

impl fmt::Debug for PCanonicalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PCanonicalTable")
            .field("p", &self.p)
            .field("basis", &self.basis)
            .field("datum", &self.datum)
            .field("columns", &self.keys().map(|k| k.len()))
            .finish()
    }
}

impl PCanonicalTable {
    /// The `p = ∞` table in the `H` basis.
    pub fn builtin(hecke: Arc<Hecke>) -> Self {
        Self::builtin_kind(hecke, BasisKind::H)
    }

    pub fn builtin_kind(hecke: Arc<Hecke>, basis: BasisKind) -> Self {
        let parabolic = Arc::new(Parabolic::new(hecke.clone()));
        PCanonicalTable {
            p: Prime::Infinity,
            basis,
            datum: hecke.weyl().datum().tag(),
            source: TableSource::Builtin,
            hecke,
            parabolic,
        }
    }

    /// Builds a table and validates every column.
    pub fn from_entries(
        hecke: Arc<Hecke>,
        p: Prime,
        basis: BasisKind,
        entries: BTreeMap<ExtElem, LinComb<ExtElem>>,
    ) -> Result<Self> {
        let t = Self::from_entries_unchecked(hecke, p, basis, entries);
        t.validate()?;
        Ok(t)
    }

    /// Skips validation. Intended for exercising the checks themselves.
    pub fn from_entries_unchecked(
        hecke: Arc<Hecke>,
        p: Prime,
        basis: BasisKind,
        entries: BTreeMap<ExtElem, LinComb<ExtElem>>,
    ) -> Self {
        let parabolic = Arc::new(Parabolic::new(hecke.clone()));
        PCanonicalTable {
            p,
            basis,
            datum: hecke.weyl().datum().tag(),
            source: TableSource::Explicit(entries),
            hecke,
            parabolic,
        }
    }

    pub fn load(hecke: Arc<Hecke>, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(hecke, &text)
    }

    pub fn from_json(hecke: Arc<Hecke>, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema("top level must be an object".into()))?;
        if obj.get("schema") != Some(&json!(1)) {
            return Err(Error::Schema("expected \"schema\": 1".into()));
        }
        let datum = obj
            .get("datum")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema("missing \"datum\"".into()))?;
        let ours = hecke.weyl().datum();
        if datum != ours.tag() && datum != ours.hash() {
            return Err(Error::Schema(format!(
                "table is for datum {datum}, loaded against {}",
                ours.tag()
            )));
        }
        let p = match obj.get("p") {
            Some(Value::String(s)) if s == "infinity" => Prime::Infinity,
            Some(Value::Number(n)) => match n.as_u64() {
                Some(p) if p >= 2 => Prime::Finite(p),
                _ => return Err(Error::Schema(format!("bad \"p\": {n}"))),
            },
            _ => return Err(Error::Schema("\"p\" must be an integer or \"infinity\"".into())),
        };
        let basis = match obj.get("basis").and_then(Value::as_str) {
            Some("H") => BasisKind::H,
            Some("N") => BasisKind::N,
            Some("M") => BasisKind::M,
            _ => return Err(Error::Schema("\"basis\" must be \"H\", \"N\" or \"M\"".into())),
        };
        let raw = obj
            .get("entries")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Schema("missing \"entries\" object".into()))?;
        let g = hecke.weyl();
        let mut entries = BTreeMap::new();
        for (wk, col) in raw {
            let w = g.parse(wk).map_err(|e| Error::Schema(format!("column {wk:?}: {e}")))?;
            let col = col
                .as_object()
                .ok_or_else(|| Error::Schema(format!("column {wk:?} must be an object")))?;
            let mut c = LinComb::new();
            for (yk, poly) in col {
                let y = g.parse(yk).map_err(|e| Error::Schema(format!("row {yk:?}: {e}")))?;
                let p: LaurentPoly = serde_json::from_value(poly.clone())
                    .map_err(|e| Error::Schema(format!("({yk}, {wk}): {e}")))?;
                if p.is_zero() {
                    continue;
                }
                if c.get(&y).is_some() {
                    return Err(Error::Schema(format!("duplicate row {yk:?} in column {wk:?}")));
                }
                c.add_term(y, &p);
            }
            if entries.insert(w, c).is_some() {
                return Err(Error::Schema(format!("duplicate column {wk:?}")));
            }
        }
        Self::from_entries(hecke, p, basis, entries)
    }

    /// Canonical JSON: keys in BFS order, two-space indentation.
    pub fn to_json(&self) -> Result<String> {
        let TableSource::Explicit(entries) = &self.source else {
            return Err(Error::Precondition(
                "the builtin table has no finite list of columns; use materialize".into(),
            ));
        };
        let g = self.hecke.weyl();
        let mut cols: Vec<&ExtElem> = entries.keys().collect();
        cols.sort_by_key(|k| g.bfs_key(k));
        let mut out = serde_json::Map::new();
        for w in cols {
            let mut rows: Vec<(&ExtElem, &LaurentPoly)> = entries[w].iter().collect();
            rows.sort_by_key(|(k, _)| g.bfs_key(k));
            let mut m = serde_json::Map::new();
            for (y, p) in rows {
                m.insert(g.format(y), serde_json::to_value(p).expect("serializable"));
            }
            out.insert(g.format(w), Value::Object(m));
        }
        let p = match self.p {
            Prime::Finite(p) => json!(p),
            Prime::Infinity => json!("infinity"),
        };
        let doc = json!({
            "schema": 1,
            "datum": self.datum,
            "p": p,
            "basis": self.basis.name(),
            "entries": Value::Object(out),
        });
        Ok(serde_json::to_string_pretty(&doc).expect("serializable"))
    }

    /// An explicit copy of this table restricted to the given columns.
    pub fn materialize(&self, keys: &[ExtElem]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for w in keys {
            entries.insert(w.clone(), self.column(w)?);
        }
        Ok(PCanonicalTable {
            source: TableSource::Explicit(entries),
            ..self.clone()
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn datum_tag(&self) -> &str {
        &self.datum
    }

    pub fn source(&self) -> &TableSource {
        &self.source
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self.source, TableSource::Builtin)
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        &self.parabolic
    }

    /// Column keys of an explicit table.
    pub fn keys(&self) -> Option<Vec<ExtElem>> {
        match &self.source {
            TableSource::Builtin => None,
            TableSource::Explicit(e) => Some(e.keys().cloned().collect()),
        }
    }

    /// sha256 of the canonical JSON, or a fixed tag for the builtin table.
    pub fn hash(&self) -> String {
        match self.to_json() {
            Ok(text) => hex::encode(Sha256::digest(text.as_bytes())),
            Err(_) => format!("builtin-kl-{}-{}", self.basis.name(), &self.hecke.weyl().datum().hash()[..16]),
        }
    }

    pub fn covers(&self, w: &ExtElem) -> bool {
        match &self.source {
            TableSource::Builtin => true,
            TableSource::Explicit(e) => e.contains_key(w),
        }
    }

    /// The column indexed by `w`, in the standard basis of the table's module.
    pub fn column(&self, w: &ExtElem) -> Result<LinComb<ExtElem>> {
        match &self.source {
            TableSource::Explicit(e) => e
                .get(w)
                .cloned()
                .ok_or_else(|| Error::TableGap(self.hecke.weyl().format(w))),
            TableSource::Builtin => self.kl_column(w),
        }
    }

    fn kl_column(&self, w: &ExtElem) -> Result<LinComb<ExtElem>> {
        Ok(match self.basis {
            BasisKind::H => self.hecke.kl_basis(w).0,
            BasisKind::N => self.parabolic.kl_n(w)?.0,
            BasisKind::M => self.parabolic.kl_m(w)?.0,
        })
    }

    /// `ᵖh_{y,w}`
    pub fn p_kl_poly(&self, y: &ExtElem, w: &ExtElem) -> Result<LaurentPoly> {
        Ok(self.column(w)?.coeff(y))
    }

    pub fn validate(&self) -> Result<()> {
        if let TableSource::Explicit(e) = &self.source {
            let g = self.hecke.weyl();
            let mut cols: Vec<&ExtElem> = e.keys().collect();
            cols.sort_by_key(|k| g.bfs_key(k));
            for w in cols {
                self.validate_column(w, &e[w])?;
            }
        }
        Ok(())
    }

    fn fail(&self, check: &'static str, y: &ExtElem, w: &ExtElem, detail: String) -> Error {
        let g = self.hecke.weyl();
        Error::Validation {
            check,
            y: g.format(y),
            w: g.format(w),
            detail,
        }
    }

    fn bar(&self, col: &LinComb<ExtElem>) -> LinComb<ExtElem> {
        match self.basis {
            BasisKind::H => self.hecke.bar(&HeckeElem(col.clone())).0,
            BasisKind::N => self.parabolic.bar_asph(&AsphElem(col.clone())).0,
            BasisKind::M => self.parabolic.bar_sph(&SphElem(col.clone())).0,
        }
    }

    pub fn validate_column(&self, w: &ExtElem, col: &LinComb<ExtElem>) -> Result<()> {
        let g = self.hecke.weyl();
        let module = self.basis != BasisKind::H;
        if module && !g.is_fwext(w) {
            return Err(self.fail("unitriangularity", w, w, "column index is not minimal in its W_f-coset".into()));
        }
        let top = col.coeff(w);
        if !top.is_one() {
            return Err(self.fail("unitriangularity", w, w, format!("diagonal entry is {top}, expected 1")));
        }
        let mut rows: Vec<&ExtElem> = col.keys().filter(|y| *y != w).collect();
        rows.sort_by_key(|k| g.bfs_key(k));
        for y in rows {
            if module && !g.is_fwext(y) {
                return Err(self.fail("unitriangularity", y, w, "row is not minimal in its W_f-coset".into()));
            }
            if g.bruhat_leq(y, w) != Some(true) {
                return Err(self.fail("unitriangularity", y, w, "row is not below the column in the Bruhat order".into()));
            }
        }

        let diff = self.bar(col).sub(col);
        if let Some(y) = diff.keys().max_by_key(|k| g.bfs_key(k)) {
            return Err(self.fail(
                "self-duality",
                y,
                w,
                format!("bar changes the coefficient by {}", diff.coeff(y)),
            ));
        }

        let mut rem = col.clone();
        while let Some(y) = rem.keys().max_by_key(|k| g.bfs_key(k)).cloned() {
            let c = rem.coeff(&y);
            if !c.is_nonnegative() {
                return Err(self.fail(
                    "kl-positivity",
                    &y,
                    w,
                    format!("coefficient {c} in the Kazhdan–Lusztig expansion"),
                ));
            }
            let kl = self.kl_column(&y)?;
            rem.add_scaled(&kl, &-c);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Weyl;

    fn hecke(t: &str) -> Arc<Hecke> {
        Arc::new(Hecke::new(Arc::new(Weyl::from_type(t).unwrap())))
    }

    #[test]
    fn json_roundtrip_of_builtin_window() {
        let h = hecke("A1");
        let g = h.weyl();
        let b = PCanonicalTable::builtin(h.clone());
        let t = b.materialize(&g.enumerate_w(5)).unwrap();
        let text = t.to_json().unwrap();
        let back = PCanonicalTable::from_json(h.clone(), &text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back.hash(), t.hash());
        let w = g.from_word(&[0, 1]);
        assert_eq!(back.p_kl_poly(&g.identity(), &w).unwrap(), LaurentPoly::monomial(2, 1));
        assert!(matches!(back.column(&g.enumerate_w(6)[12]), Err(Error::TableGap(_))));
    }

    #[test]
    fn detects_each_violation() {
        let h = hecke("A1");
        let g = h.weyl();
        let w = g.from_word(&[0, 1, 0]);
        let y = g.gen(0).clone();
        let good = h.kl_basis(&w).0;

        let mut bad = good.clone();
        bad.add_term(w.clone(), &LaurentPoly::one());
        let e = PCanonicalTable::from_entries(h.clone(), Prime::Finite(2), BasisKind::H, [(w.clone(), bad)].into());
        assert!(matches!(e, Err(Error::Validation { check: "unitriangularity", .. })));

        let mut bad = good.clone();
        bad.add_term(y.clone(), &LaurentPoly::v());
        let e = PCanonicalTable::from_entries(h.clone(), Prime::Finite(2), BasisKind::H, [(w.clone(), bad)].into());
        assert!(matches!(e, Err(Error::Validation { check: "self-duality", .. })));

        // H̲_w − H̲_y is bar-invariant and unitriangular but not positive.
        let mut bad = good.clone();
        bad.sub_assign(&h.kl_basis(&y));
        let e = PCanonicalTable::from_entries(h.clone(), Prime::Finite(2), BasisKind::H, [(w.clone(), bad)].into());
        match e {
            Err(Error::Validation { check, y: yy, .. }) => {
                assert_eq!(check, "kl-positivity");
                assert_eq!(yy, g.format(&y));
            }
            other => panic!("{other:?}"),
        }

        let mut fine = good.clone();
        fine.add_assign(&h.kl_basis(&y));
        PCanonicalTable::from_entries(h.clone(), Prime::Finite(2), BasisKind::H, [(w, fine)].into()).unwrap();
    }

    #[test]
    fn module_tables_validate() {
        let h = hecke("A1");
        let g = h.weyl();
        let ws = g.enumerate_fwext(4);
        for kind in [BasisKind::N, BasisKind::M] {
            let t = PCanonicalTable::builtin_kind(h.clone(), kind).materialize(&ws).unwrap();
            t.validate().unwrap();
            let back = PCanonicalTable::from_json(h.clone(), &t.to_json().unwrap()).unwrap();
            assert_eq!(back.basis(), kind);
        }
    }

    #[test]
    fn schema_errors() {
        let h = hecke("A1");
        for text in [
            "[]",
            r#"{"schema":2}"#,
            r#"{"schema":1,"datum":"nope","p":3,"basis":"H","entries":{}}"#,
        ] {
            assert!(matches!(PCanonicalTable::from_json(h.clone(), text), Err(Error::Schema(_))));
        }
        let tag = h.weyl().datum().tag();
        let text = format!(r#"{{"schema":1,"datum":"{tag}","p":"seven","basis":"H","entries":{{}}}}"#);
        assert!(matches!(PCanonicalTable::from_json(h.clone(), &text), Err(Error::Schema(_))));
    }
}
