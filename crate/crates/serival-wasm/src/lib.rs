use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn placeholder() -> String {
    "serival".to_string()
}
