//! Eager-forward tape with reverse-mode gradients over small vector nodes.
//!
//! The op set is exactly what the predictor topology needs: dense layers,
//! ReLU, sigmoid, embedding lookup, concatenation, residual addition, an L2
//! normalizer for the (sin, cos) head, elementwise products for interaction
//! chains, and constant scaling. Parameter gradients accumulate into the
//! [`ParamStore`] gradient buffers.

use super::params::{ParamStore, TensorId};

pub type NodeId = usize;

#[derive(Clone, Debug)]
enum Op {
    Input,
    Dense { w: TensorId, b: TensorId, x: NodeId },
    Relu { x: NodeId },
    Sigmoid { x: NodeId },
    Concat { xs: Vec<NodeId> },
    Add { a: NodeId, b: NodeId },
    EmbedRow { table: TensorId, row: usize },
    Normalize2 { x: NodeId },
    Mul { a: NodeId, b: NodeId },
    ScaleConst { x: NodeId, c: f64 },
}

#[derive(Default)]
pub struct Tape {
    ops: Vec<Op>,
    values: Vec<Vec<f64>>,
}

impl Tape {
    pub fn new() -> Tape {
        Tape::default()
    }

    pub fn clear(&mut self) {
        self.ops.clear();
        self.values.clear();
    }

    pub fn value(&self, id: NodeId) -> &[f64] {
        &self.values[id]
    }

    pub fn scalar(&self, id: NodeId) -> f64 {
        debug_assert_eq!(self.values[id].len(), 1);
        self.values[id][0]
    }

    fn push(&mut self, op: Op, value: Vec<f64>) -> NodeId {
        self.ops.push(op);
        self.values.push(value);
        self.values.len() - 1
    }

    pub fn input(&mut self, v: Vec<f64>) -> NodeId {
        self.push(Op::Input, v)
    }

    pub fn dense(&mut self, store: &ParamStore, w: TensorId, b: TensorId, x: NodeId) -> NodeId {
        let wt = store.tensor(w);
        let bt = store.tensor(b);
        let xv = &self.values[x];
        debug_assert_eq!(wt.cols, xv.len(), "dense {}: input width", wt.name);
        debug_assert_eq!(bt.cols * bt.rows, wt.rows, "dense {}: bias width", wt.name);
        let mut y = bt.data.clone();
        for r in 0..wt.rows {
            let row = &wt.data[r * wt.cols..(r + 1) * wt.cols];
            let mut acc = 0.0;
            for (wi, xi) in row.iter().zip(xv.iter()) {
                acc += wi * xi;
            }
            y[r] += acc;
        }
        self.push(Op::Dense { w, b, x }, y)
    }

    pub fn relu(&mut self, x: NodeId) -> NodeId {
        let y = self.values[x].iter().map(|v| v.max(0.0)).collect();
        self.push(Op::Relu { x }, y)
    }

    pub fn sigmoid(&mut self, x: NodeId) -> NodeId {
        let y = self.values[x].iter().map(|v| 1.0 / (1.0 + (-v).exp())).collect();
        self.push(Op::Sigmoid { x }, y)
    }

    pub fn concat(&mut self, xs: &[NodeId]) -> NodeId {
        let mut y = Vec::new();
        for &id in xs {
            y.extend_from_slice(&self.values[id]);
        }
        self.push(Op::Concat { xs: xs.to_vec() }, y)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        debug_assert_eq!(self.values[a].len(), self.values[b].len());
        let y = self.values[a].iter().zip(&self.values[b]).map(|(x, y)| x + y).collect();
        self.push(Op::Add { a, b }, y)
    }

    pub fn embed_row(&mut self, store: &ParamStore, table: TensorId, row: usize) -> NodeId {
        let t = store.tensor(table);
        debug_assert!(row < t.rows, "embedding row {row} out of {}", t.rows);
        let y = t.data[row * t.cols..(row + 1) * t.cols].to_vec();
        self.push(Op::EmbedRow { table, row }, y)
    }

    /// L2-normalizes a length-2 vector (the (sin, cos) head).
    pub fn normalize2(&mut self, x: NodeId) -> NodeId {
        let v = &self.values[x];
        debug_assert_eq!(v.len(), 2);
        let r = (v[0] * v[0] + v[1] * v[1]).sqrt().max(1e-12);
        let y = vec![v[0] / r, v[1] / r];
        self.push(Op::Normalize2 { x }, y)
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        debug_assert_eq!(self.values[a].len(), self.values[b].len());
        let y = self.values[a].iter().zip(&self.values[b]).map(|(x, y)| x * y).collect();
        self.push(Op::Mul { a, b }, y)
    }

    pub fn scale_const(&mut self, x: NodeId, c: f64) -> NodeId {
        let y = self.values[x].iter().map(|v| v * c).collect();
        self.push(Op::ScaleConst { x, c }, y)
    }

    /// Reverse sweep. Each `(node, adjoint)` seed contributes its adjoint to
    /// the node; parameter gradients are accumulated into `store.grad` and
    /// the full node adjoints are returned (inputs included).
    pub fn backward(&self, store: &mut ParamStore, seeds: &[(NodeId, Vec<f64>)]) -> Vec<Vec<f64>> {
        let mut adj: Vec<Vec<f64>> = self.values.iter().map(|v| vec![0.0; v.len()]).collect();
        for (node, seed) in seeds {
            debug_assert_eq!(seed.len(), adj[*node].len());
            for (a, s) in adj[*node].iter_mut().zip(seed) {
                *a += s;
            }
        }
        for id in (0..self.ops.len()).rev() {
            if adj[id].iter().all(|a| *a == 0.0) {
                continue;
            }
            let dy = std::mem::take(&mut adj[id]);
            match &self.ops[id] {
                Op::Input => {}
                Op::Dense { w, b, x } => {
                    let xv = self.values[*x].clone();
                    {
                        let wt = store.tensor_mut(*w);
                        for r in 0..wt.rows {
                            let g = dy[r];
                            if g == 0.0 {
                                continue;
                            }
                            let row = &mut wt.grad[r * wt.cols..(r + 1) * wt.cols];
                            for (gw, xi) in row.iter_mut().zip(&xv) {
                                *gw += g * xi;
                            }
                        }
                    }
                    {
                        let bt = store.tensor_mut(*b);
                        for (gb, g) in bt.grad.iter_mut().zip(&dy) {
                            *gb += g;
                        }
                    }
                    let wt = store.tensor(*w);
                    let dx = &mut adj[*x];
                    for r in 0..wt.rows {
                        let g = dy[r];
                        if g == 0.0 {
                            continue;
                        }
                        let row = &wt.data[r * wt.cols..(r + 1) * wt.cols];
                        for (dxi, wi) in dx.iter_mut().zip(row) {
                            *dxi += g * wi;
                        }
                    }
                }
                Op::Relu { x } => {
                    let yv = &self.values[id];
                    let dx = &mut adj[*x];
                    for i in 0..dy.len() {
                        if yv[i] > 0.0 {
                            dx[i] += dy[i];
                        }
                    }
                }
                Op::Sigmoid { x } => {
                    let yv = &self.values[id];
                    let dx = &mut adj[*x];
                    for i in 0..dy.len() {
                        dx[i] += dy[i] * yv[i] * (1.0 - yv[i]);
                    }
                }
                Op::Concat { xs } => {
                    let mut offset = 0;
                    for &src in xs {
                        let len = self.values[src].len();
                        let dx = &mut adj[src];
                        for i in 0..len {
                            dx[i] += dy[offset + i];
                        }
                        offset += len;
                    }
                }
                Op::Add { a, b } => {
                    for i in 0..dy.len() {
                        adj[*a][i] += dy[i];
                    }
                    for i in 0..dy.len() {
                        adj[*b][i] += dy[i];
                    }
                }
                Op::EmbedRow { table, row } => {
                    let t = store.tensor_mut(*table);
                    let g = &mut t.grad[row * t.cols..(row + 1) * t.cols];
                    for (gi, d) in g.iter_mut().zip(&dy) {
                        *gi += d;
                    }
                }
                Op::Normalize2 { x } => {
                    let xv = &self.values[*x];
                    let r = (xv[0] * xv[0] + xv[1] * xv[1]).sqrt().max(1e-12);
                    let y = [xv[0] / r, xv[1] / r];
                    let ydot = y[0] * dy[0] + y[1] * dy[1];
                    adj[*x][0] += (dy[0] - y[0] * ydot) / r;
                    adj[*x][1] += (dy[1] - y[1] * ydot) / r;
                }
                Op::Mul { a, b } => {
                    let (av, bv) = (self.values[*a].clone(), self.values[*b].clone());
                    for i in 0..dy.len() {
                        adj[*a][i] += dy[i] * bv[i];
                    }
                    for i in 0..dy.len() {
                        adj[*b][i] += dy[i] * av[i];
                    }
                }
                Op::ScaleConst { x, c } => {
                    for i in 0..dy.len() {
                        adj[*x][i] += dy[i] * c;
                    }
                }
            }
            adj[id] = dy;
        }
        adj
    }
}
