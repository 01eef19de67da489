//! Ranking metrics and the evaluation report. Tie handling is pessimistic
//! throughout: a positive tied with a negative ranks below it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_finite(scores: &[f64], what: &str) -> Result<()> {
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "{what} contain a non-finite score"
        )));
    }
    Ok(())
}

/// Fraction of positives scoring strictly above the K-th highest negative.
/// With fewer than K negatives every positive is a hit.
pub fn hits_at_k(pos: &[f64], neg: &[f64], k: usize) -> Result<f64> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InvalidInput(
            "hits@k needs nonempty positive and negative score lists".into(),
        ));
    }
    if k < 1 {
        return Err(Error::InvalidInput("hits@k needs k >= 1".into()));
    }
    check_finite(pos, "positive scores")?;
    check_finite(neg, "negative scores")?;
    if neg.len() < k {
        return Ok(1.0);
    }
    let mut sorted = neg.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let threshold = sorted[k - 1];
    let hits = pos.iter().filter(|&&s| s > threshold).count();
    Ok(hits as f64 / pos.len() as f64)
}

/// One ranking instance: a true pair's score against its own negatives.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub positive: f64,
    pub negatives: Vec<f64>,
}

/// Mean reciprocal rank over candidate sets. The positive's rank is one
/// plus the number of negatives scoring greater than or equal to it.
pub fn mrr(sets: &[CandidateSet]) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::InvalidInput("mrr over zero candidate sets".into()));
    }
    let mut total = 0.0;
    for set in sets {
        if set.negatives.is_empty() {
            return Err(Error::InvalidInput(
                "candidate set has no negatives".into(),
            ));
        }
        if !set.positive.is_finite() {
            return Err(Error::InvalidInput(
                "candidate set has a non-finite positive score".into(),
            ));
        }
        check_finite(&set.negatives, "candidate negatives")?;
        let above = set.negatives.iter().filter(|&&n| n >= set.positive).count();
        total += 1.0 / (1 + above) as f64;
    }
    Ok(total / sets.len() as f64)
}

/// Probability a random positive outscores a random negative; ties count
/// half. Computed by rank counting against the sorted negatives.
pub fn auc(pos: &[f64], neg: &[f64]) -> Result<f64> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InvalidInput(
            "auc needs nonempty positive and negative score lists".into(),
        ));
    }
    check_finite(pos, "positive scores")?;
    check_finite(neg, "negative scores")?;
    let mut sorted = neg.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut wins = 0.0;
    for &p in pos {
        let less = sorted.partition_point(|&x| x < p);
        let less_eq = sorted.partition_point(|&x| x <= p);
        wins += less as f64 + 0.5 * (less_eq - less) as f64;
    }
    Ok(wins / (pos.len() as f64 * neg.len() as f64))
}

/// One scored pair in the ranked listing.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RankedScore {
    pub i: usize,
    pub j: usize,
    pub label: u8,
    pub score: f64,
    pub rank: usize,
}

/// Full evaluation result. Serialization order is fixed so identical inputs
/// produce byte-identical documents.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalReport {
    pub format: String,
    pub version: u32,
    pub positives: usize,
    pub negatives: usize,
    pub hits_at_k: BTreeMap<usize, f64>,
    pub mrr: f64,
    pub auc: f64,
    pub ranked: Vec<RankedScore>,
}

pub const EVAL_REPORT_FORMAT: &str = "eval-report";
pub const EVAL_REPORT_VERSION: u32 = 1;

/// Assemble a report from scored pairs plus per-source candidate sets for
/// the reciprocal-rank metric. `ks` lists the Hits@K cutoffs.
pub fn build_report(
    pos: &[(usize, usize, f64)],
    neg: &[(usize, usize, f64)],
    mrr_sets: &[CandidateSet],
    ks: &[usize],
) -> Result<EvalReport> {
    let pos_scores: Vec<f64> = pos.iter().map(|&(_, _, s)| s).collect();
    let neg_scores: Vec<f64> = neg.iter().map(|&(_, _, s)| s).collect();
    let mut hits = BTreeMap::new();
    for &k in ks {
        hits.insert(k, hits_at_k(&pos_scores, &neg_scores, k)?);
    }
    let mrr_value = mrr(mrr_sets)?;
    let auc_value = auc(&pos_scores, &neg_scores)?;

    let mut ranked: Vec<RankedScore> = pos
        .iter()
        .map(|&(i, j, score)| (i, j, 1u8, score))
        .chain(neg.iter().map(|&(i, j, score)| (i, j, 0u8, score)))
        .map(|(i, j, label, score)| RankedScore {
            i,
            j,
            label,
            score,
            rank: 0,
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap()
            .then_with(|| b.label.cmp(&a.label))
            .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
    });
    for (idx, r) in ranked.iter_mut().enumerate() {
        r.rank = idx + 1;
    }

    Ok(EvalReport {
        format: EVAL_REPORT_FORMAT.to_string(),
        version: EVAL_REPORT_VERSION,
        positives: pos.len(),
        negatives: neg.len(),
        hits_at_k: hits,
        mrr: mrr_value,
        auc: auc_value,
        ranked,
    })
}

impl EvalReport {
    /// Plain-text table for terminal output.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "metric            value\n-----------------------\npositives    {:>10}\nnegatives    {:>10}\n",
            self.positives, self.negatives
        ));
        for (k, v) in &self.hits_at_k {
            out.push_str(&format!("hits@{:<8}{:>10.6}\n", k, v));
        }
        out.push_str(&format!("mrr          {:>10.6}\n", self.mrr));
        out.push_str(&format!("auc          {:>10.6}\n", self.auc));
        out
    }
}
