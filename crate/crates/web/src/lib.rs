//! Browser bindings: a word-map distribution, a `Pr_k` table over the
//! catalog, and a single theorem check. Every function returns JSON text.

use serde_json::json;
use wasm_bindgen::prelude::*;

use wordprob_core::corpus::{catalog, GroupSpec};
use wordprob_core::prob;
use wordprob_core::rational;
use wordprob_core::spectrum::{sweep, ResultCache, SpectrumFilter};
use wordprob_core::theorems::{self, Budget, Delta, Epsilon};
use wordprob_core::{Error, Word};

/// Browser-side work cap; pages stay responsive below this.
const WEB_BUDGET: u64 = 50_000_000;
const WEB_MAX_ORDER: usize = 64;

pub fn distribution_json(group: &str, word: &str) -> Result<String, Error> {
    let spec: GroupSpec = group.parse()?;
    let g = spec.build()?;
    let w = Word::parse(word)?;
    let d = prob::exact_distribution(&g, &w, WEB_BUDGET)?;
    let classes: Vec<_> = (0..d.num_classes())
        .map(|c| {
            json!({
                "representative": g.label(d.representatives()[c]),
                "size": d.sizes()[c],
                "mass": rational::to_text(&d.mass(c)),
                "mass_decimal": rational::to_f64(&d.mass(c)),
                "element_prob": rational::to_text(&d.element_prob(c)),
            })
        })
        .collect();
    Ok(json!({"group": spec.to_string(), "order": g.order(), "word": w.to_string(), "classes": classes}).to_string())
}

pub fn prk_table_json(k: usize, max_order: usize, nonabelian_only: bool) -> Result<String, Error> {
    let max_order = max_order.min(WEB_MAX_ORDER);
    let filter = if nonabelian_only { SpectrumFilter::NonGammaKTrivial } else { SpectrumFilter::All };
    let mut cache = ResultCache::in_memory();
    let (s, _) = sweep(&catalog(max_order), k, max_order, filter, &mut cache, WEB_BUDGET)?;
    Ok(serde_json::to_string(&s).expect("spectra serialise"))
}

pub fn verify_json(theorem: &str, group: &str, k: usize) -> Result<String, Error> {
    let spec: GroupSpec = group.parse()?;
    let g = spec.build()?;
    if g.order() > WEB_MAX_ORDER {
        return Err(Error::Parameters(format!("the demo stops at order {WEB_MAX_ORDER}")));
    }
    let id = spec.to_string();
    let b = Budget::with_ops(WEB_BUDGET);
    let eps = Epsilon::Auto;
    let delta = Delta::EpsOver(2);
    let report = match theorem {
        "finite" => theorems::verify_theorem_finite(&g, &id, k, &eps, &b)?,
        "lemma1" => theorems::verify_lemma1(&g, &id, &Word::lower_central(k), &eps, &delta, &b)?,
        "prop2" => theorems::verify_prop2(&g, &id, &Word::lower_central(k), &eps, &delta, &b)?,
        "structure" => theorems::verify_theorem_structure(&g, &id, k, &eps, &b)?,
        "squares" => theorems::verify_squares_inequality(&g, &id, &b)?,
        "identity" => theorems::certify_identity(&g, &id, k, &eps, &b)?,
        other => return Err(Error::Parameters(format!("unknown theorem `{other}`"))),
    };
    Ok(report.to_json_line())
}

fn js(r: Result<String, Error>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn distribution(group: &str, word: &str) -> Result<String, JsValue> {
    js(distribution_json(group, word))
}

#[wasm_bindgen]
pub fn prk_table(k: usize, max_order: usize, nonabelian_only: bool) -> Result<String, JsValue> {
    js(prk_table_json(k, max_order, nonabelian_only))
}

#[wasm_bindgen]
pub fn verify(theorem: &str, group: &str, k: usize) -> Result<String, JsValue> {
    js(verify_json(theorem, group, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn distribution_of_commutator_on_q8() {
        let v: Value = serde_json::from_str(&distribution_json("Dic:2", "wk:2").unwrap()).unwrap();
        assert_eq!(v["classes"][0]["mass"], "5/8");
        assert!(distribution_json("Q:8", "x1").is_err());
    }

    #[test]
    fn prk_table_maximum() {
        let v: Value = serde_json::from_str(&prk_table_json(2, 16, true).unwrap()).unwrap();
        assert_eq!(v["maximum"], "5/8");
    }

    #[test]
    fn verify_reports() {
        for t in ["finite", "lemma1", "prop2", "structure", "squares", "identity"] {
            let v: Value = serde_json::from_str(&verify_json(t, "D:4", 2).unwrap()).unwrap();
            assert_eq!(v["verdict"], "pass", "{t}");
        }
        assert!(verify_json("nope", "D:4", 2).is_err());
        assert!(verify_json("finite", "S:5", 2).is_err());
    }
}
