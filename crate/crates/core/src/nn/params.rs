//! Named parameter matrices with per-parameter optimizer state.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

/// Index into a [`ParamStore`]. Only valid for the store that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamId(pub(crate) usize);

#[derive(Debug, Clone)]
pub struct Param {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    /// Shared with tape leaves; optimizer steps copy-on-write.
    pub data: Arc<Vec<f64>>,
    pub(crate) m: Vec<f64>,
    pub(crate) v: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub enum Init {
    /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
    UniformFanIn { fan_in: usize },
    Zeros,
}

#[derive(Debug, Clone, Default)]
pub struct ParamStore {
    params: Vec<Param>,
    by_name: HashMap<String, usize>,
    pub(crate) step: u64,
}

impl ParamStore {
    pub fn new() -> ParamStore {
        ParamStore::default()
    }

    /// Register a parameter. Names must be unique within a store.
    pub fn add<R: Rng>(
        &mut self,
        name: &str,
        rows: usize,
        cols: usize,
        init: Init,
        rng: &mut R,
    ) -> ParamId {
        assert!(
            !self.by_name.contains_key(name),
            "duplicate parameter name {name}"
        );
        let n = rows * cols;
        let data = match init {
            Init::UniformFanIn { fan_in } => {
                let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
                (0..n).map(|_| rng.random_range(-bound..bound)).collect()
            }
            Init::Zeros => vec![0.0; n],
        };
        let id = ParamId(self.params.len());
        self.by_name.insert(name.to_string(), id.0);
        self.params.push(Param {
            name: name.to_string(),
            rows,
            cols,
            data: Arc::new(data),
            m: vec![0.0; n],
            v: vec![0.0; n],
        });
        id
    }

    pub fn get(&self, id: ParamId) -> &Param {
        &self.params[id.0]
    }

    pub fn id_of(&self, name: &str) -> Option<ParamId> {
        self.by_name.get(name).copied().map(ParamId)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParamId, &Param)> {
        self.params.iter().enumerate().map(|(i, p)| (ParamId(i), p))
    }

    pub fn total_values(&self) -> usize {
        self.params.iter().map(|p| p.data.len()).sum()
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Add `delta` to one stored value; used by finite differencing.
    pub fn perturb(&mut self, id: ParamId, index: usize, delta: f64) {
        let p = &mut self.params[id.0];
        Arc::make_mut(&mut p.data)[index] += delta;
    }

    /// Replace a parameter's values, keeping optimizer state. Lengths must match.
    pub fn set_values(&mut self, id: ParamId, values: Vec<f64>) {
        let p = &mut self.params[id.0];
        assert_eq!(p.data.len(), values.len());
        p.data = Arc::new(values);
    }

    pub(crate) fn param_mut(&mut self, idx: usize) -> &mut Param {
        &mut self.params[idx]
    }
}

/// Dense gradients aligned with a store's parameter list.
#[derive(Debug, Clone)]
pub struct Grads {
    by_param: Vec<Vec<f64>>,
}

impl Grads {
    pub fn zeros_like(store: &ParamStore) -> Grads {
        Grads {
            by_param: store.params.iter().map(|p| vec![0.0; p.data.len()]).collect(),
        }
    }

    pub fn get(&self, id: ParamId) -> &[f64] {
        &self.by_param[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut [f64] {
        &mut self.by_param[id.0]
    }

    pub fn add_to(&mut self, id: ParamId, delta: &[f64]) {
        let g = &mut self.by_param[id.0];
        debug_assert_eq!(g.len(), delta.len());
        for (a, b) in g.iter_mut().zip(delta.iter()) {
            *a += b;
        }
    }

    /// Elementwise accumulate another gradient set.
    pub fn add_assign(&mut self, other: &Grads) {
        debug_assert_eq!(self.by_param.len(), other.by_param.len());
        for (mine, theirs) in self.by_param.iter_mut().zip(other.by_param.iter()) {
            for (a, b) in mine.iter_mut().zip(theirs.iter()) {
                *a += b;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for g in &mut self.by_param {
            for v in g.iter_mut() {
                *v *= factor;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.by_param
            .iter()
            .flat_map(|g| g.iter())
            .fold(0.0, |acc: f64, &v| acc.max(v.abs()))
    }

    pub(crate) fn param_slice(&self, idx: usize) -> &[f64] {
        &self.by_param[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn init_is_seed_deterministic_and_bounded() {
        let build = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = ParamStore::new();
            let id = s.add("w", 16, 16, Init::UniformFanIn { fan_in: 16 }, &mut rng);
            s.get(id).data.as_ref().clone()
        };
        let a = build(7);
        let b = build(7);
        assert_eq!(a, b);
        let c = build(8);
        assert_ne!(a, c);
        let bound = 1.0 / 4.0;
        assert!(a.iter().all(|v| v.abs() <= bound));
        assert!(a.iter().any(|v| v.abs() > 1e-6));
    }

    #[test]
    fn name_lookup_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = ParamStore::new();
        let id = s.add("layer.w", 2, 3, Init::Zeros, &mut rng);
        assert_eq!(s.id_of("layer.w"), Some(id));
        assert_eq!(s.id_of("missing"), None);
        assert_eq!(s.get(id).rows, 2);
        assert_eq!(s.total_values(), 6);
    }

    #[test]
    fn grads_accumulate_and_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = ParamStore::new();
        let id = s.add("w", 1, 2, Init::Zeros, &mut rng);
        let mut g = Grads::zeros_like(&s);
        g.add_to(id, &[1.0, -2.0]);
        let mut h = Grads::zeros_like(&s);
        h.add_to(id, &[0.5, 0.5]);
        g.add_assign(&h);
        g.scale(2.0);
        assert_eq!(g.get(id), &[3.0, -3.0]);
        assert_eq!(g.max_abs(), 3.0);
    }
}
