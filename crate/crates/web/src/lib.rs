//! Browser bindings. Every export takes plain arguments and returns a JSON string.

use adc_core::complex::suspend;
use adc_core::hom::enumerate_homs;
use adc_core::nerve::rs_nerve;
use adc_core::oriental::oriental;
use adc_core::suite::named_complex;
use adc_core::suspect::profiles;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest oriental the page will build.
pub const MAX_ORIENTAL: i64 = 7;
/// Largest nerve dimension the page will compute.
pub const MAX_NERVE_DIM: usize = 4;

fn complex(name: &str) -> Result<adc_core::complex::BasedComplex, String> {
    named_complex(name.trim()).ok_or_else(|| format!("unknown complex {name:?}; try O0, O1, O2 or O1xO1op"))
}

pub fn oriental_doc(m: i64) -> Result<String, String> {
    if !(-1..=MAX_ORIENTAL).contains(&m) {
        return Err(format!("m must lie in -1..={MAX_ORIENTAL}"));
    }
    let c = oriental(m);
    Ok(json!({"m": m, "ranks": c.ranks(), "complex": c}).to_string())
}

pub fn hom_doc(source: &str, target: &str, cap: u64) -> Result<String, String> {
    let e = enumerate_homs(&complex(source)?, &complex(target)?, cap);
    Ok(json!({"count": e.morphisms.len(), "complete": e.complete, "morphisms": e.morphisms}).to_string())
}

pub fn suspect_doc(name: &str, max_dim: usize, cap: u64) -> Result<String, String> {
    if max_dim > MAX_NERVE_DIM {
        return Err(format!("dimension must be at most {MAX_NERVE_DIM}"));
    }
    let mut n = rs_nerve(&suspend(&complex(name)?), max_dim, cap).map_err(|e| e.to_string())?;
    let p = profiles(&mut n);
    let suspect = p.iter().filter(|s| s.suspect == Some(true)).count();
    Ok(json!({"levels": n.msset().counts(), "suspect": suspect, "profiles": p}).to_string())
}

/// The oriental `O[m]` with its ranks.
#[wasm_bindgen(js_name = buildOriental)]
pub fn build_oriental(m: i32) -> Result<String, JsError> {
    oriental_doc(m.into()).map_err(|e| JsError::new(&e))
}

/// Every morphism between two named complexes.
#[wasm_bindgen(js_name = enumerateHoms)]
pub fn enumerate(source: &str, target: &str, cap: u32) -> Result<String, JsError> {
    hom_doc(source, target, cap.into()).map_err(|e| JsError::new(&e))
}

/// Suspect profiles of the nerve of the suspension of a named complex.
#[wasm_bindgen(js_name = suspectReport)]
pub fn suspect_report(name: &str, max_dim: u32, cap: u32) -> Result<String, JsError> {
    suspect_doc(name, max_dim as usize, cap.into()).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn triangle_ranks() {
        assert_eq!(parse(oriental_doc(2).unwrap())["ranks"], json!([3, 3, 1]));
        assert!(oriental_doc(99).is_err());
    }

    #[test]
    fn arrows_into_the_triangle() {
        let v = parse(hom_doc("O1", "O2", 64).unwrap());
        assert_eq!(v["count"], 7);
        assert_eq!(v["complete"], true);
        assert!(hom_doc("nope", "O2", 64).is_err());
    }

    #[test]
    fn suspect_report_is_consistent() {
        let v = parse(suspect_doc("O1", 2, 64).unwrap());
        let n = v["profiles"].as_array().unwrap().iter().filter(|p| p["suspect"] == true).count();
        assert_eq!(v["suspect"], n);
        assert!(suspect_doc("O1", 9, 64).is_err());
    }
}
