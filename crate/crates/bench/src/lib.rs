//! Inputs shared by the benchmarks.

use num_bigint::BigInt;
use num_traits::One;
use toricdegen::polytope::ri;
use toricdegen::{LatticePolytope, LatticeVector, Partition, Point};

/// `conv{e_0, e_0 + (n+1)e_i}` with `e_0 = (−1, …, −1)`: the anticanonical
/// polytope of projective `n`-space.
pub fn simplex_dn(n: usize) -> LatticePolytope {
    let mut pts = vec![Point(vec![ri(-1); n])];
    for i in 0..n {
        let mut v = vec![ri(-1); n];
        v[i] = ri(n as i64);
        pts.push(Point(v));
    }
    LatticePolytope::from_vertices(&pts).expect("a simplex")
}

/// Rays `e_1, e_2 − e_1, …, −e_n` of the fan of projective `n`-space.
pub fn sigma_rays(n: usize) -> Vec<LatticeVector> {
    let mut rays = vec![LatticeVector::unit(n, 0)];
    for i in 0..n {
        let mut v = LatticeVector::zero(n);
        if i + 1 < n {
            v.0[i + 1] = BigInt::one();
        }
        v.0[i] -= BigInt::one();
        rays.push(v);
    }
    rays
}

pub fn gamma(n: usize) -> Partition {
    Partition::from_fan_rays(simplex_dn(n), &sigma_rays(n)).expect("a semi-stable partition")
}
