//! Named, grouped parameter storage with gradient and Adam moment buffers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Trainable parameter groups; freezing and checkpoint sectioning work at
/// this granularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Embedding,
    LatentMlp,
    AngleBranch,
    PerpBranch,
    ParBranch,
    FusionModule,
}

impl Group {
    pub const ALL: [Group; 6] = [
        Group::Embedding,
        Group::LatentMlp,
        Group::AngleBranch,
        Group::PerpBranch,
        Group::ParBranch,
        Group::FusionModule,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Embedding => "embedding",
            Group::LatentMlp => "latent_mlp",
            Group::AngleBranch => "angle_branch",
            Group::PerpBranch => "perp_branch",
            Group::ParBranch => "par_branch",
            Group::FusionModule => "fusion_module",
        }
    }

    pub fn parse(s: &str) -> Option<Group> {
        Group::ALL.iter().copied().find(|g| g.as_str() == s)
    }
}

pub type TensorId = usize;

/// One parameter tensor (weights as rows x cols, biases as 1 x n) with its
/// gradient and first/second Adam moments.
#[derive(Clone, Debug)]
pub struct ParamTensor {
    pub name: String,
    pub group: Group,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
    pub grad: Vec<f64>,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl ParamTensor {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// All trainable tensors of a network, addressable by id and partitioned by
/// group for stage-wise freezing.
#[derive(Clone, Debug, Default)]
pub struct ParamStore {
    pub tensors: Vec<ParamTensor>,
}

impl ParamStore {
    /// Registers a zero-initialized tensor and returns its id.
    pub fn add(&mut self, name: &str, group: Group, rows: usize, cols: usize) -> TensorId {
        let n = rows * cols;
        self.tensors.push(ParamTensor {
            name: name.to_string(),
            group,
            rows,
            cols,
            data: vec![0.0; n],
            grad: vec![0.0; n],
            m: vec![0.0; n],
            v: vec![0.0; n],
        });
        self.tensors.len() - 1
    }

    pub fn tensor(&self, id: TensorId) -> &ParamTensor {
        &self.tensors[id]
    }

    pub fn tensor_mut(&mut self, id: TensorId) -> &mut ParamTensor {
        &mut self.tensors[id]
    }

    pub fn total_params(&self) -> usize {
        self.tensors.iter().map(|t| t.len()).sum()
    }

    /// Flat copy of all parameter values, in registration order.
    pub fn snapshot(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_params());
        for t in &self.tensors {
            out.extend_from_slice(&t.data);
        }
        out
    }

    /// Flat copy of one group's parameter values.
    pub fn snapshot_group(&self, group: Group) -> Vec<f64> {
        let mut out = Vec::new();
        for t in self.tensors.iter().filter(|t| t.group == group) {
            out.extend_from_slice(&t.data);
        }
        out
    }

    /// Accumulates another store's gradients into this one (shapes must
    /// match; used for deterministic batch reduction).
    pub fn add_grads_from(&mut self, other: &ParamStore) {
        for (t, o) in self.tensors.iter_mut().zip(&other.tensors) {
            debug_assert_eq!(t.len(), o.len());
            for (g, og) in t.grad.iter_mut().zip(&o.grad) {
                *g += og;
            }
        }
    }

    /// Scales every gradient, e.g. by 1/batch.
    pub fn scale_grads(&mut self, s: f64) {
        for t in &mut self.tensors {
            for g in &mut t.grad {
                *g *= s;
            }
        }
    }
}

/// Xavier-uniform initialization: uniform on
/// [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))].
pub fn xavier_init(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect()
}
