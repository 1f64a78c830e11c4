//! Text and JSON encodings of group elements.
//!
//! The text form is `w: s0 s1 | t: (a,b) | omega: k`, any subset of fields,
//! denoting the product `word · t_λ · ω_k`. Printing produces the least
//! reduced word of the `W`-part followed by the index of the right
//! `Ω`-factor; when `Ω` is infinite the pair form `w: <finite word> | t: (λ)`
//! is printed instead.

use serde::{Deserialize, Serialize};

use super::{ExtElem, Weyl};
use crate::error::{Error, Result};
use crate::rootdata::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub w: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
}

fn word_text(g: &Weyl, word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|&s| g.gen_name(s)).collect::<Vec<_>>().join(" ")
    }
}

pub(super) fn format(g: &Weyl, x: &ExtElem) -> String {
    let j = to_json(g, x);
    let word: Vec<usize> = j.w.iter().map(|n| g.gen_by_name(n).unwrap()).collect();
    let mut out = format!("w: {}", word_text(g, &word));
    if let Some(t) = &j.t {
        out.push_str(&format!(" | t: {}", Weight::from_slice(t)));
    }
    if let Some(k) = j.omega {
        out.push_str(&format!(" | omega: {k}"));
    }
    out
}

pub(super) fn to_json(g: &Weyl, x: &ExtElem) -> ElemJson {
    if g.omega_elements().is_some() {
        let (word, om) = g.lexmin_word(x);
        let k = g.omega_index(&om).expect("length-zero part is in Ω");
        ElemJson {
            w: word.iter().map(|&s| g.gen_name(s).to_string()).collect(),
            t: None,
            omega: (k != 0).then_some(k),
        }
    } else {
        let word: Vec<usize> = g
            .fin()
            .word(x.fin)
            .iter()
            .map(|&i| g.finite_gen(i as usize))
            .collect();
        ElemJson {
            w: word.iter().map(|&s| g.gen_name(s).to_string()).collect(),
            t: (!x.trans.is_zero()).then(|| x.trans.0.to_vec()),
            omega: None,
        }
    }
}

pub(super) fn from_json(g: &Weyl, j: &ElemJson) -> Result<ExtElem> {
    let mut x = g.identity();
    for name in &j.w {
        if name == "e" {
            continue;
        }
        let s = g
            .gen_by_name(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
        x = g.mul_gen(&x, s);
    }
    if let Some(t) = &j.t {
        if t.len() != g.datum().lattice_rank {
            return Err(Error::Parse(format!(
                "translation has {} coordinates, lattice rank is {}",
                t.len(),
                g.datum().lattice_rank
            )));
        }
        x = g.mul(&x, &g.translation(&Weight::from_slice(t)));
    }
    if let Some(k) = j.omega {
        let om = g
            .omega_elements()
            .and_then(|l| l.get(k))
            .ok_or_else(|| Error::Parse(format!("no length-zero element with index {k}")))?;
        x = g.mul(&x, om);
    }
    Ok(x)
}

pub(super) fn parse(g: &Weyl, s: &str) -> Result<ExtElem> {
    let mut j = ElemJson {
        w: vec![],
        t: None,
        omega: None,
    };
    let mut seen = [false; 3];
    for field in s.split('|') {
        let field = field.trim();
        if field.is_empty() {
            return Err(Error::Parse(format!("empty field in {s:?}")));
        }
        let (key, val) = match field.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => ("w", field),
        };
        let slot = match key {
            "w" => 0,
            "t" => 1,
            "omega" => 2,
            _ => return Err(Error::Parse(format!("unknown field {key:?}"))),
        };
        if std::mem::replace(&mut seen[slot], true) {
            return Err(Error::Parse(format!("repeated field {key:?}")));
        }
        match slot {
            0 => j.w = val.split_whitespace().map(str::to_string).collect(),
            1 => {
                let inner = val
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("translation must be parenthesized: {val:?}")))?;
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse(format!("bad translation {val:?}: {e}")))?;
                j.t = Some(coords);
            }
            _ => {
                j.omega = Some(
                    val.parse()
                        .map_err(|e| Error::Parse(format!("bad omega index {val:?}: {e}")))?,
                )
            }
        }
    }
    from_json(g, &j)
}

#[cfg(test)]
mod tests {
    use super::super::Weyl;

    #[test]
    fn roundtrip_a1() {
        let g = Weyl::from_type("A1").unwrap();
        for x in g.enumerate_fwext(4) {
            let s = g.format(&x);
            let y = g.parse(&s).unwrap();
            assert_eq!(x, y, "{s}");
            assert_eq!(g.format(&y), s);
            assert_eq!(g.from_json(&g.to_json(&x)).unwrap(), x);
        }
        assert_eq!(g.format(&g.identity()), "w: e");
        assert_eq!(g.format(&g.parse("s1 s0").unwrap()), "w: s1 s0");
    }

    #[test]
    fn pair_form_and_mixed_fields() {
        let g = Weyl::from_type("A2").unwrap();
        let x = g.parse("w: s1 | t: (1,0)").unwrap();
        assert_eq!(x.fin, g.fin().simple(0));
        assert_eq!(x.trans.0.as_slice(), &[1, 0]);
        let y = g.parse("t: (1,0) | w: s1").unwrap();
        assert_eq!(x, y);
        assert!(g.parse("w: s9").is_err());
        assert!(g.parse("t: 1,0").is_err());
        assert!(g.parse("omega: 7").is_err());
        assert!(g.parse("w: s1 | w: s2").is_err());
    }
}
