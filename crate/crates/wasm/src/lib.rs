//! WebAssembly bindings for the browser demo. Every export takes and returns
//! strings; results are JSON objects, with an `error` field on bad input.

pub mod logic;

use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn check(spec: &str, t1: &str, t2: &str) -> String {
    logic::check(spec, t1, t2).to_string()
}

#[wasm_bindgen]
pub fn size_grid(spec: &str, cap: usize) -> String {
    logic::size_grid(spec, cap).to_string()
}

#[wasm_bindgen]
pub fn construct(spec: &str, r1: usize, r2: usize) -> String {
    logic::construct(spec, r1, r2).to_string()
}
