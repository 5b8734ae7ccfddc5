//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; errors surface as thrown JS errors.
//! The `demo` functions are the plain-Rust bodies so they can be tested
//! natively.

use wasm_bindgen::prelude::*;

pub mod demo {
    use hvol::periods::PeriodMatrices;
    use hvol::volume::{volume_table, VolumeEngine};
    use hvol::{Genus, TensorElement};
    use serde_json::{json, Value};

    fn genus(g: i32) -> Result<Genus, String> {
        Genus::new(g.into()).map_err(|e| e.to_string())
    }

    /// Harmonic volume on every element of the family A.
    pub fn volume_table_json(g: i32) -> Result<String, String> {
        let g = genus(g)?;
        let engine = VolumeEngine::new(g).map_err(|e| e.to_string())?;
        let rows = volume_table(&engine).map_err(|e| e.to_string())?;
        let entries: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "kind": r.element.kind.label(),
                    "indices": r.element.index_label(),
                    "slots": r.element.tensor.to_string(),
                    "value": r.value.value.as_str(),
                    "raw": r.value.raw,
                    "residual": r.value.residual,
                    "matches": r.matches(),
                })
            })
            .collect();
        Ok(json!({"genus": g.get(), "entries": entries}).to_string())
    }

    /// `Im Z` with the symmetry and real-part diagnostics.
    pub fn period_matrix_json(g: i32) -> Result<String, String> {
        let g = genus(g)?;
        let p = PeriodMatrices::new(g).map_err(|e| e.to_string())?;
        let n = g.get();
        let im: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|c| p.z[(r, c)].im).collect())
            .collect();
        Ok(json!({
            "genus": n,
            "im_z": im,
            "symmetry_error": p.symmetry_error(),
            "real_part_max": p.real_part_max(),
            "positive_definite": p.im_z_positive_definite(),
        })
        .to_string())
    }

    /// Harmonic volume of a typed tensor such as `x1⊗y1⊗y3 - x4⊗y4⊗y3`.
    pub fn evaluate_tensor_json(g: i32, expr: &str) -> Result<String, String> {
        let g = genus(g)?;
        let t: TensorElement = expr.parse().map_err(|e: hvol::Error| e.to_string())?;
        let engine = VolumeEngine::new(g).map_err(|e| e.to_string())?;
        let raw = engine.volume_complex(&t).map_err(|e| e.to_string())?;
        let snapped = engine.volume(&t).ok();
        Ok(json!({
            "genus": g.get(),
            "tensor": t.to_string(),
            "raw": hvol::volume::reduce_mod1(raw.re),
            "value": snapped.map(|v| v.value.as_str()),
        })
        .to_string())
    }
}

#[wasm_bindgen]
pub fn volume_table_json(genus: i32) -> Result<String, JsError> {
    demo::volume_table_json(genus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn period_matrix_json(genus: i32) -> Result<String, JsError> {
    demo::period_matrix_json(genus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn evaluate_tensor_json(genus: i32, expr: &str) -> Result<String, JsError> {
    demo::evaluate_tensor_json(genus, expr).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::demo::*;
    use serde_json::Value;

    #[test]
    fn table_has_expected_values() {
        let v: Value = serde_json::from_str(&volume_table_json(4).unwrap()).unwrap();
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 280);
        assert!(entries.iter().all(|e| e["matches"] == true));
    }

    #[test]
    fn period_matrix_is_imaginary() {
        let v: Value = serde_json::from_str(&period_matrix_json(5).unwrap()).unwrap();
        assert_eq!(v["im_z"].as_array().unwrap().len(), 5);
        assert_eq!(v["positive_definite"], true);
        assert!(v["real_part_max"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn evaluates_typed_tensors() {
        let v: Value =
            serde_json::from_str(&evaluate_tensor_json(4, "x1⊗y1⊗y3 - x4⊗y4⊗y3").unwrap()).unwrap();
        assert_eq!(v["value"], "1/2");
        let v: Value = serde_json::from_str(&evaluate_tensor_json(4, "x1 x2 y3").unwrap()).unwrap();
        assert_eq!(v["value"], "0");
        assert!(evaluate_tensor_json(4, "x1 y1 y2")
            .unwrap_err()
            .contains("kernel of p"));
        assert!(evaluate_tensor_json(2, "x1 x2 y3").is_err());
        assert!(evaluate_tensor_json(3, "x1 q2").is_err());
    }
}
