//! Dense multilinear coefficient tensors.
//!
//! A rank-(n+1) tensor with shape `[d, ..., d, e]` stores a multilinear map
//! `A^{⊗n} -> M` on a fixed ordered basis: the entry at `[i1, ..., in, k]` is
//! the k-th output coordinate on the basis tuple `(e_{i1}, ..., e_{in})`.
//! All index arithmetic is row-major.

use crate::matrix::Matrix;
use crate::scalar::{zero, Rat};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Rat>,
}

/// Calls `f` on every multi-index of the given shape in lexicographic order.
pub fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    if dims.is_empty() {
        f(&idx);
        return;
    }
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl Tensor {
    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        Tensor {
            dims,
            data: vec![zero(); len],
        }
    }

    pub fn from_fn(dims: Vec<usize>, f: impl Fn(&[usize]) -> Rat) -> Self {
        let mut t = Tensor::zeros(dims);
        let dims = t.dims.clone();
        for_each_index(&dims, |idx| {
            let v = f(idx);
            if !v.is_zero() {
                t.set(idx, v);
            }
        });
        t
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn flat(&self) -> &[Rat] {
        &self.data
    }

    pub fn flat_mut(&mut self) -> &mut [Rat] {
        &mut self.data
    }

    pub fn from_flat(dims: Vec<usize>, data: Vec<Rat>) -> Self {
        assert_eq!(dims.iter().product::<usize>(), data.len());
        Tensor { dims, data }
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        for (i, d) in idx.iter().zip(&self.dims) {
            debug_assert!(i < d);
            off = off * d + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &Rat {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rat) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &Rat) {
        if v.is_zero() {
            return;
        }
        let off = self.offset(idx);
        self.data[off] = &self.data[off] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dims, other.dims);
        Tensor {
            dims: self.dims.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dims, other.dims);
        Tensor {
            dims: self.dims.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// First multi-index with a nonzero entry, in lexicographic order.
    pub fn first_nonzero(&self) -> Option<Vec<usize>> {
        let pos = self.data.iter().position(|v| !v.is_zero())?;
        let mut idx = vec![0; self.dims.len()];
        let mut rem = pos;
        for k in (0..self.dims.len()).rev() {
            idx[k] = rem % self.dims[k];
            rem /= self.dims[k];
        }
        Some(idx)
    }

    /// Replaces input slot `mode` by its image under `s`:
    /// `out[.., j, ..] = Σ_i s[i][j] · t[.., i, ..]`, i.e. the multilinear map
    /// is precomposed with `s` in that slot. `s` may be rectangular
    /// (`old_dim × new_dim`), changing the slot dimension.
    pub fn precompose_slot(&self, mode: usize, s: &Matrix) -> Tensor {
        let d_in = self.dims[mode];
        assert_eq!(s.rows(), d_in, "matrix rows must match slot dimension");
        let d_out = s.cols();
        let stride: usize = self.dims[mode + 1..].iter().product();
        let mut dims = self.dims.clone();
        dims[mode] = d_out;
        let mut out = Tensor::zeros(dims);
        for (pos, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let i = (pos / stride) % d_in;
            let outer = pos / (stride * d_in);
            let inner = pos % stride;
            for j in 0..d_out {
                let c = s.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let o = (outer * d_out + j) * stride + inner;
                out.data[o] = &out.data[o] + &(c * v);
            }
        }
        out
    }

    /// Applies `t_out` to the output coordinates (the last mode):
    /// `out[.., k] = Σ_l t_out[k][l] · t[.., l]`. `t_out` may be rectangular
    /// (`new_dim × old_dim`), changing the output dimension.
    pub fn postcompose(&self, t_out: &Matrix) -> Tensor {
        let e_in = *self.dims.last().expect("tensor has no output mode");
        assert_eq!(t_out.cols(), e_in, "matrix cols must match output dimension");
        let e_out = t_out.rows();
        let mut dims = self.dims.clone();
        *dims.last_mut().unwrap() = e_out;
        let mut out = Tensor::zeros(dims);
        for (pos, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let l = pos % e_in;
            let base = (pos / e_in) * e_out;
            for k in 0..e_out {
                let c = t_out.get(k, l);
                if c.is_zero() {
                    continue;
                }
                out.data[base + k] = &out.data[base + k] + &(c * v);
            }
        }
        out
    }

    /// Contracts away the first input mode against a coordinate vector:
    /// `out[rest] = Σ_i v[i] · t[i, rest]`.
    pub fn contract_first(&self, v: &[Rat]) -> Tensor {
        let d = self.dims[0];
        assert_eq!(v.len(), d);
        let rest: usize = self.dims[1..].iter().product();
        let mut out = Tensor::zeros(self.dims[1..].to_vec());
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let block = &self.data[i * rest..(i + 1) * rest];
            for (p, a) in block.iter().enumerate() {
                if !a.is_zero() {
                    out.data[p] = &out.data[p] + &(c * a);
                }
            }
        }
        out
    }

    /// Fully evaluates the multilinear map on coordinate vectors, returning
    /// the output coordinate vector.
    pub fn eval(&self, args: &[&[Rat]]) -> Vec<Rat> {
        assert_eq!(args.len() + 1, self.dims.len());
        let mut t = self.clone();
        for v in args {
            t = t.contract_first(v);
        }
        t.data
    }

    /// Evaluates on basis vectors `(e_{i1}, .., e_{in})`: just a slice read.
    pub fn eval_basis(&self, idx: &[usize]) -> Vec<Rat> {
        assert_eq!(idx.len() + 1, self.dims.len());
        let e = *self.dims.last().unwrap();
        let mut full = idx.to_vec();
        full.push(0);
        let off = self.offset(&full);
        self.data[off..off + e].to_vec()
    }
}

/// Plugs `inner` (an n-ary map into the algebra) into input slot `slot` of
/// `outer` (an m-ary map): the result is the (m+n-1)-ary map
/// `out[pre, block, suf][k] = Σ_l inner[block][l] · outer[pre, l, suf][k]`.
pub fn compose_at(outer: &Tensor, slot: usize, inner: &Tensor) -> Tensor {
    let m = outer.dims.len() - 1;
    let n = inner.dims.len() - 1;
    assert!(slot < m, "slot out of range");
    let d = outer.dims[slot];
    assert_eq!(
        *inner.dims.last().unwrap(),
        d,
        "inner output does not match outer slot"
    );
    let mut dims = Vec::with_capacity(m + n);
    dims.extend_from_slice(&outer.dims[..slot]);
    dims.extend_from_slice(&inner.dims[..n]);
    dims.extend_from_slice(&outer.dims[slot + 1..]);
    let mut out = Tensor::zeros(dims);

    let e = *outer.dims.last().unwrap();
    let pre: usize = outer.dims[..slot].iter().product();
    let suf: usize = outer.dims[slot + 1..m].iter().product();
    let block: usize = inner.dims[..n].iter().product();

    // outer flat offset = ((p * d + l) * suf + s) * e + k
    // out flat offset   = ((p * block + b) * suf + s) * e + k
    for b in 0..block {
        for l in 0..d {
            let w = &inner.data[b * d + l];
            if w.is_zero() {
                continue;
            }
            for p in 0..pre {
                let src = ((p * d + l) * suf) * e;
                let dst = ((p * block + b) * suf) * e;
                for se in 0..suf * e {
                    let a = &outer.data[src + se];
                    if !a.is_zero() {
                        out.data[dst + se] = &out.data[dst + se] + &(a * w);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn index_roundtrip() {
        let t = Tensor::from_fn(vec![2, 3, 2], |idx| rat((idx[0] * 6 + idx[1] * 2 + idx[2]) as i64));
        let mut count = 0;
        for_each_index(t.dims(), |idx| {
            assert_eq!(*t.get(idx), rat(t.offset(idx) as i64));
            count += 1;
        });
        assert_eq!(count, 12);
        assert_eq!(t.first_nonzero(), Some(vec![0, 0, 1]));
    }

    #[test]
    fn precompose_matches_direct_evaluation() {
        // f(a, b) with f = tensor over dim 2 -> dim 2, s applied in slot 0
        let f = Tensor::from_fn(vec![2, 2, 2], |idx| rat((idx[0] + 2 * idx[1] + idx[2]) as i64));
        let s = Matrix::from_rows(vec![
            vec![rat(1), rat(2)],
            vec![rat(0), rat(-1)],
        ]);
        let g = f.precompose_slot(0, &s);
        for j in 0..2 {
            for b in 0..2 {
                let sj = s.col(j);
                let direct = f.eval(&[&sj, &[rat((b == 0) as i64), rat((b == 1) as i64)]]);
                assert_eq!(g.eval_basis(&[j, b]), direct);
            }
        }
    }

    #[test]
    fn compose_at_is_substitution() {
        // outer: 2-ary, inner: 2-ary over dim 2; check on all basis tuples
        let outer = Tensor::from_fn(vec![2, 2, 2], |idx| rat((idx[0] * 3 + idx[1] + idx[2]) as i64));
        let inner = Tensor::from_fn(vec![2, 2, 2], |idx| {
            rat(idx[0] as i64 + 2 * idx[1] as i64 - idx[2] as i64)
        });
        let comp = compose_at(&outer, 1, &inner);
        assert_eq!(comp.dims(), &[2, 2, 2, 2]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let unit_a: Vec<Rat> = (0..2).map(|i| rat((i == a) as i64)).collect();
                    let w = inner.eval_basis(&[b, c]);
                    let direct = outer.eval(&[&unit_a, &w]);
                    assert_eq!(comp.eval_basis(&[a, b, c]), direct);
                }
            }
        }
    }

    #[test]
    fn postcompose_applies_output_matrix() {
        let t = Tensor::from_fn(vec![2, 2], |idx| rat((idx[0] + idx[1]) as i64));
        let m = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        let u = t.postcompose(&m);
        for i in 0..2 {
            assert_eq!(u.get(&[i, 0]), t.get(&[i, 1]));
            assert_eq!(u.get(&[i, 1]), t.get(&[i, 0]));
        }
    }
}
