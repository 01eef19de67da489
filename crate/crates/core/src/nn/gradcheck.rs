//! Central-difference verification of analytic gradients.

use crate::error::{Error, Result};
use crate::exec;
use crate::nn::params::{Grads, ParamId, ParamStore};

#[derive(Debug, Clone)]
pub struct FdReport {
    pub checked: usize,
    pub max_rel_err: f64,
    pub worst_param: String,
    pub worst_index: usize,
    pub worst_analytic: f64,
    pub worst_numeric: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare `analytic` against central differences of `forward` at every
/// parameter coordinate. Relative error per coordinate is
/// |a - n| / max(|a|, |n|, 1). The forward closure is evaluated twice up
/// front; a bitwise mismatch between those runs aborts with a determinism
/// error, since finite differencing is meaningless on a noisy function.
pub fn finite_diff_check<F>(
    store: &ParamStore,
    analytic: &Grads,
    forward: F,
    step: f64,
    tolerance: f64,
) -> Result<FdReport>
where
    F: Fn(&ParamStore) -> Result<f64> + Sync,
{
    let l1 = forward(store)?;
    let l2 = forward(store)?;
    if l1.to_bits() != l2.to_bits() {
        return Err(Error::Determinism(format!(
            "forward is not reproducible: {l1} vs {l2}"
        )));
    }

    let mut coords: Vec<(usize, usize)> = Vec::with_capacity(store.total_values());
    for (id, p) in store.iter() {
        for i in 0..p.data.len() {
            coords.push((id.0, i));
        }
    }
    let chunks: Vec<&[(usize, usize)]> = coords.chunks(64).collect();
    let numeric_chunks = exec::map(&chunks, |chunk| -> Result<Vec<f64>> {
        let mut local = store.clone();
        let mut out = Vec::with_capacity(chunk.len());
        for &(pidx, i) in chunk.iter() {
            let id = ParamId(pidx);
            local.perturb(id, i, step);
            let plus = forward(&local)?;
            local.perturb(id, i, -2.0 * step);
            let minus = forward(&local)?;
            local.perturb(id, i, step);
            out.push((plus - minus) / (2.0 * step));
        }
        Ok(out)
    });

    let mut report = FdReport {
        checked: coords.len(),
        max_rel_err: 0.0,
        worst_param: String::new(),
        worst_index: 0,
        worst_analytic: 0.0,
        worst_numeric: 0.0,
        tolerance,
        pass: true,
    };
    let mut flat = Vec::with_capacity(coords.len());
    for chunk in numeric_chunks {
        flat.extend(chunk?);
    }
    for (&(pidx, i), &numeric) in coords.iter().zip(flat.iter()) {
        let id = ParamId(pidx);
        let a = analytic.get(id)[i];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1.0);
        if rel > report.max_rel_err || !rel.is_finite() {
            report.max_rel_err = rel;
            report.worst_param = store.get(id).name.clone();
            report.worst_index = i;
            report.worst_analytic = a;
            report.worst_numeric = numeric;
        }
    }
    report.pass = report.max_rel_err.is_finite() && report.max_rel_err <= tolerance;
    Ok(report)
}
