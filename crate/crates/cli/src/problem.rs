//! The on-disk problem format: one JSON file describing a polycyclic
//! presentation plus named endomorphisms and elements to talk about.
//!
//! Generators are numbered from 1 in files and on the command line; a
//! relative order of 0 means infinite. Words are [generator, exponent]
//! pairs. The endomorphism name `id` is reserved for the identity.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use twistconj::{GroupMorphism, PcpBuilder, PcpElement, PcpPresentation};

pub type JsonWord = Vec<(usize, i64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub generator_count: usize,
    /// One entry per generator; 0 stands for infinite order.
    pub relative_orders: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub power_relations: Vec<PowerRelation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugation_relations: Vec<ConjugationRelation>,
    /// Name -> one image word per generator.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub endomorphisms: BTreeMap<String, Vec<JsonWord>>,
    /// Named elements usable wherever the command line expects one.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, JsonWord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerRelation {
    pub generator: usize,
    pub word: JsonWord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationRelation {
    pub acting: usize,
    pub target: usize,
    pub word: JsonWord,
    /// Action of the inverse of the acting generator, required when that
    /// generator has infinite order and acts nontrivially.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_word: Option<JsonWord>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<ProblemFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let file: ProblemFile = serde_json::from_str(&text)
            .map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
        if file.relative_orders.len() != file.generator_count {
            return Err(format!(
                "relative_orders lists {} entries for {} generators",
                file.relative_orders.len(),
                file.generator_count
            ));
        }
        if file.endomorphisms.contains_key("id") {
            return Err("the endomorphism name id is reserved for the identity".into());
        }
        Ok(file)
    }

    /// Check and collect a word: 1-based generator indices into 0-based.
    fn word(&self, w: &JsonWord, what: &str) -> Result<Vec<(usize, i64)>, String> {
        let mut out = Vec::with_capacity(w.len());
        for &(gen, exp) in w {
            if gen == 0 || gen > self.generator_count {
                return Err(format!(
                    "{what} mentions generator {gen}; valid generators are 1..={}",
                    self.generator_count
                ));
            }
            out.push((gen - 1, exp));
        }
        Ok(out)
    }

    pub fn build_group(&self) -> Result<Arc<PcpPresentation>, String> {
        let orders: Vec<Option<u64>> = self
            .relative_orders
            .iter()
            .map(|&r| if r == 0 { None } else { Some(r) })
            .collect();
        let mut b = PcpBuilder::new(&orders);
        for pr in &self.power_relations {
            if pr.generator == 0 || pr.generator > self.generator_count {
                return Err(format!("power relation names generator {}", pr.generator));
            }
            let w = self.word(&pr.word, "a power relation")?;
            b = b.power(pr.generator - 1, &w);
        }
        for cr in &self.conjugation_relations {
            if cr.acting == 0 || cr.acting > self.generator_count {
                return Err(format!("conjugation relation names generator {}", cr.acting));
            }
            if cr.target == 0 || cr.target > self.generator_count {
                return Err(format!("conjugation relation names generator {}", cr.target));
            }
            let w = self.word(&cr.word, "a conjugation relation")?;
            b = b.conjugation(cr.acting - 1, cr.target - 1, &w);
            if let Some(iw) = &cr.inverse_word {
                let w = self.word(iw, "an inverse conjugation relation")?;
                b = b.conjugation_inverse(cr.acting - 1, cr.target - 1, &w);
            }
        }
        b.build().map(Arc::new).map_err(|e| e.to_string())
    }

    /// Resolve an endomorphism by name. `verify` controls whether the
    /// images are checked against the defining relations.
    pub fn endomorphism(
        &self,
        g: &Arc<PcpPresentation>,
        name: &str,
        verify: bool,
    ) -> Result<GroupMorphism, String> {
        if name == "id" {
            return Ok(GroupMorphism::identity(g));
        }
        let words = self
            .endomorphisms
            .get(name)
            .ok_or_else(|| format!("no endomorphism named {name} in the problem file"))?;
        if words.len() != self.generator_count {
            return Err(format!(
                "endomorphism {name} lists {} images for {} generators",
                words.len(),
                self.generator_count
            ));
        }
        let mut images = Vec::with_capacity(words.len());
        for w in words {
            images.push(g.elem(&self.word(w, &format!("an image of {name}"))?));
        }
        if verify {
            GroupMorphism::new(g.clone(), g.clone(), images)
                .map_err(|_| format!("endomorphism {name} does not respect the defining relations"))
        } else {
            GroupMorphism::new_unverified(g.clone(), g.clone(), images).map_err(|e| e.to_string())
        }
    }

    /// Resolve an element: a name from the file, `id`/`1`, or a literal
    /// word like `g1^2*g3^-1`.
    pub fn element(&self, g: &Arc<PcpPresentation>, name: &str) -> Result<PcpElement, String> {
        if let Some(w) = self.elements.get(name) {
            return Ok(g.elem(&self.word(w, &format!("element {name}"))?));
        }
        parse_element(g, name).map_err(|e| {
            format!("{name} is not a named element of the problem file, and {e}")
        })
    }
}

/// Parse a literal word: `id`, `1`, or `*`-separated factors `g3`, `g3^-2`.
pub fn parse_element(g: &Arc<PcpPresentation>, s: &str) -> Result<PcpElement, String> {
    let t = s.trim();
    if t == "id" || t == "1" {
        return Ok(g.identity());
    }
    let mut word = Vec::new();
    for factor in t.split('*') {
        let f = factor.trim();
        let rest = f
            .strip_prefix('g')
            .ok_or_else(|| format!("factor {f} is not of the form g3 or g3^-2"))?;
        let (idx_s, exp_s) = match rest.split_once('^') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let idx: usize = idx_s
            .parse()
            .map_err(|_| format!("factor {f} has no generator number"))?;
        if idx == 0 || idx > g.generator_count() {
            return Err(format!(
                "factor {f} names generator {idx}; valid generators are 1..={}",
                g.generator_count()
            ));
        }
        let exp: i64 = match exp_s {
            Some(e) => e
                .parse()
                .map_err(|_| format!("factor {f} has a malformed exponent"))?,
            None => 1,
        };
        if exp != 0 {
            word.push((idx - 1, exp));
        }
    }
    Ok(g.elem(&word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_file() -> ProblemFile {
        ProblemFile {
            generator_count: 2,
            relative_orders: vec![2, 3],
            power_relations: vec![],
            conjugation_relations: vec![ConjugationRelation {
                acting: 1,
                target: 2,
                word: vec![(2, 2)],
                inverse_word: None,
            }],
            endomorphisms: BTreeMap::from([(
                "invert".to_string(),
                vec![vec![(1, 1)], vec![(2, 2)]],
            )]),
            elements: BTreeMap::from([("ab".to_string(), vec![(1, 1), (2, 1)])]),
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = s3_file();
        let text = serde_json::to_string_pretty(&f).unwrap();
        let back: ProblemFile = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn builds_and_resolves() {
        let f = s3_file();
        let g = f.build_group().unwrap();
        assert_eq!(g.order(), Some(6.into()));
        let m = f.endomorphism(&g, "invert", true).unwrap();
        assert_eq!(m.apply(&g.generator(1)), g.elem(&[(1, 2)]));
        assert!(f.endomorphism(&g, "id", true).is_ok());
        assert!(f.endomorphism(&g, "nope", true).is_err());
        let ab = f.element(&g, "ab").unwrap();
        assert_eq!(ab, g.elem(&[(0, 1), (1, 1)]));
        let lit = f.element(&g, "g1*g2^-1").unwrap();
        assert_eq!(lit, g.elem(&[(0, 1), (1, -1)]));
        assert!(f.element(&g, "g9").is_err());
    }

    #[test]
    fn words_validate_generator_range() {
        let mut f = s3_file();
        f.conjugation_relations[0].word = vec![(7, 1)];
        assert!(f.build_group().is_err());
        let f = s3_file();
        let g = f.build_group().unwrap();
        assert!(f.element(&g, "g0").is_err());
    }

    #[test]
    fn bad_homomorphisms_are_rejected_unless_skipped() {
        let mut f = s3_file();
        // b -> b is not compatible with b^a = b^2 when a -> id
        f.endomorphisms.insert(
            "broken".to_string(),
            vec![vec![], vec![(2, 1)]],
        );
        let g = f.build_group().unwrap();
        assert!(f.endomorphism(&g, "broken", true).is_err());
        assert!(f.endomorphism(&g, "broken", false).is_ok());
    }
}
