//! Dense box `[-r, r]^d` addressed by a single index.
//!
//! `x_1` is the most significant digit, so index order is lexicographic
//! order on points inside the box.

use crate::lattice::Point;

#[derive(Clone, Debug)]
pub(crate) struct Grid {
    pub d: usize,
    pub r: i32,
    pub strides: Vec<usize>,
    /// Offsets for `+e_1, -e_1, +e_2, -e_2, ...`.
    pub nbr: Vec<isize>,
    pub origin: usize,
    pub len: usize,
}

impl Grid {
    pub fn new(d: usize, r: i32) -> Grid {
        let side = (2 * r + 1) as usize;
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * side;
        }
        let len = strides[0] * side;
        let nbr = strides.iter().flat_map(|&s| [s as isize, -(s as isize)]).collect();
        let origin = strides.iter().map(|&s| s * r as usize).sum();
        Grid { d, r, strides, nbr, origin, len }
    }

    #[inline]
    pub fn step(&self, idx: usize, k: usize) -> usize {
        (idx as isize + self.nbr[k]) as usize
    }

    #[inline]
    pub fn layer(&self, idx: usize) -> i32 {
        (idx / self.strides[0]) as i32 - self.r
    }

    pub fn coords(&self, idx: usize) -> Vec<i32> {
        let mut rem = idx;
        self.strides
            .iter()
            .map(|&s| {
                let c = (rem / s) as i32 - self.r;
                rem %= s;
                c
            })
            .collect()
    }

    /// `point(idx) - point(anchor)` in the packed form of [`crate::constructs`].
    pub fn packed_rel(&self, idx: usize, anchor: usize) -> u64 {
        let (mut a, mut b) = (idx, anchor);
        let mut out = 0u64;
        for &s in &self.strides {
            let c = (a / s) as i64 - (b / s) as i64;
            a %= s;
            b %= s;
            out = out << 7 | (c + 64) as u64;
        }
        out
    }

    /// `point(idx) - point(anchor)`.
    pub fn rel_point(&self, idx: usize, anchor: usize) -> Point {
        let a = self.coords(anchor);
        Point(self.coords(idx).iter().zip(&a).map(|(x, y)| x - y).collect())
    }
}
