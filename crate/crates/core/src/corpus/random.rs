//! Random latin squares (Jacobson–Matthews walk) and random isotopies.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::perm::Permutation;
use crate::square::LatinSquare;
use crate::transforms::{ConjugateName, IsotopyTriple};

/// Incidence cube with at most one `-1` entry.
struct Cube {
    n: usize,
    m: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
}

impl Cube {
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.m[self.idx(r, c, s)]
    }

    fn add(&mut self, r: usize, c: usize, s: usize, d: i8) {
        let i = self.idx(r, c, s);
        self.m[i] += d;
    }

    fn ones<R: Rng>(&self, rng: &mut R, pick: impl Fn(usize) -> i8) -> usize {
        let hits: Vec<usize> = (0..self.n).filter(|&t| pick(t) == 1).collect();
        *hits.choose(rng).expect("every line holds a 1")
    }

    fn step<R: Rng>(&mut self, rng: &mut R) {
        let n = self.n;
        let (r, c, s) = match self.improper {
            Some(cell) => cell,
            None => loop {
                let (r, c, s) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.at(r, c, s) == 0 {
                    break (r, c, s);
                }
            },
        };
        let r2 = self.ones(rng, |t| self.at(t, c, s));
        let c2 = self.ones(rng, |t| self.at(r, t, s));
        let s2 = self.ones(rng, |t| self.at(r, c, t));
        for (a, b, d, delta) in [
            (r, c, s, 1),
            (r, c2, s2, 1),
            (r2, c, s2, 1),
            (r2, c2, s, 1),
            (r, c, s2, -1),
            (r, c2, s, -1),
            (r2, c, s, -1),
            (r2, c2, s2, -1),
        ] {
            self.add(a, b, d, delta);
        }
        self.improper = (self.at(r2, c2, s2) == -1).then_some((r2, c2, s2));
    }
}

/// An approximately uniform random latin square of order `n ≥ 1`.
pub fn random_latin_square<R: Rng>(n: usize, rng: &mut R) -> LatinSquare {
    let mut cube = Cube {
        n,
        m: vec![0; n * n * n],
        improper: None,
    };
    for r in 0..n {
        for c in 0..n {
            cube.add(r, c, (r + c) % n, 1);
        }
    }
    if n > 1 {
        for _ in 0..n * n * n {
            cube.step(rng);
        }
        while cube.improper.is_some() {
            cube.step(rng);
        }
    }
    LatinSquare::from_fn(n, |r, c| {
        (0..n).find(|&s| cube.at(r, c, s) == 1).expect("proper cube")
    })
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle is a bijection")
}

pub fn random_isotopy<R: Rng>(n: usize, rng: &mut R) -> IsotopyTriple {
    IsotopyTriple {
        row_perm: random_permutation(n, rng),
        col_perm: random_permutation(n, rng),
        sym_perm: random_permutation(n, rng),
    }
}

pub fn random_conjugate<R: Rng>(rng: &mut R) -> ConjugateName {
    *ConjugateName::ALL.choose(rng).expect("six names")
}
