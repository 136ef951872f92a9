//! JSON wire formats for signals and periodic functions.
//!
//! Signal JSON: `{"L": int, "offset": int, "re": [..], "im": [..]}`.
//! Periodic JSON mirrors it plus `{"period_steps": int}`. The lattice steps
//! `(p, q)` are configuration, not payload: loaders take them from the caller
//! and check `L` against it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{LatticeGrid, PeriodicSignal, SampledSignal};

#[derive(Debug, Serialize, Deserialize)]
pub struct SignalJson {
    #[serde(rename = "L")]
    pub l: i64,
    pub offset: i64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PeriodicJson {
    #[serde(rename = "L")]
    pub l: i64,
    pub offset: i64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub period_steps: i64,
}

pub fn signal_to_json(f: &SampledSignal) -> SignalJson {
    SignalJson {
        l: f.grid().l(),
        offset: f.offset(),
        re: f.samples().iter().map(|z| z.re).collect(),
        im: f.samples().iter().map(|z| z.im).collect(),
    }
}

pub fn signal_from_json(json: &SignalJson, grid: LatticeGrid) -> Result<SampledSignal> {
    if json.l != grid.l() {
        return Err(Error::BadSignalJson(format!(
            "signal has L = {}, configured lattice has L = {}",
            json.l,
            grid.l()
        )));
    }
    if json.re.len() != json.im.len() {
        return Err(Error::BadSignalJson(format!(
            "re has {} entries, im has {}",
            json.re.len(),
            json.im.len()
        )));
    }
    let samples = json
        .re
        .iter()
        .zip(&json.im)
        .map(|(re, im)| Complex64::new(*re, *im))
        .collect();
    Ok(SampledSignal::new(grid, json.offset, samples))
}

pub fn periodic_to_json(h: &PeriodicSignal) -> PeriodicJson {
    PeriodicJson {
        l: h.grid().l(),
        offset: 0,
        re: h.samples().iter().map(|z| z.re).collect(),
        im: h.samples().iter().map(|z| z.im).collect(),
        period_steps: h.period_steps(),
    }
}

pub fn periodic_from_json(json: &PeriodicJson, grid: LatticeGrid) -> Result<PeriodicSignal> {
    if json.l != grid.l() {
        return Err(Error::BadSignalJson(format!(
            "periodic signal has L = {}, configured lattice has L = {}",
            json.l,
            grid.l()
        )));
    }
    if json.re.len() != json.im.len() || json.re.len() != json.period_steps as usize {
        return Err(Error::BadSignalJson(
            "re/im length must equal period_steps".into(),
        ));
    }
    let samples = json
        .re
        .iter()
        .zip(&json.im)
        .map(|(re, im)| Complex64::new(*re, *im))
        .collect();
    Ok(PeriodicSignal::new(grid, samples))
}
