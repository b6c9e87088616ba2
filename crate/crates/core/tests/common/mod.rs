#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use toricdegen::polytope::{ri, Halfspace};
use toricdegen::{LatticePolytope, LatticeVector, Partition, Point};

pub fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

pub fn pt(c: &[i64]) -> Point {
    Point::from_i64(c)
}

pub fn poly(pts: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::from_i64_vertices(pts).unwrap()
}

pub fn pieces(list: &[&[&[i64]]]) -> Vec<Vec<LatticeVector>> {
    list.iter().map(|p| p.iter().map(|v| lv(v)).collect()).collect()
}

/// `conv{e_0, e_0 + (n+1)e_i}` with `e_0 = (−1, …, −1)`.
pub fn simplex_dn(n: usize) -> LatticePolytope {
    let mut pts = vec![Point(vec![ri(-1); n])];
    for i in 0..n {
        let mut v = vec![ri(-1); n];
        v[i] = ri(n as i64);
        pts.push(Point(v));
    }
    LatticePolytope::from_vertices(&pts).unwrap()
}

/// `v_0 = e_1`, `v_i = e_{i+1} − e_i`, `e_{n+1} = 0`.
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

pub fn gamma_n(n: usize) -> Partition {
    Partition::from_fan_rays(simplex_dn(n), &sigma_rays(n)).unwrap()
}

/// `dΔ_3` cut by `x_1 + … + x_k = j` for `0 < j < d`.
pub fn gamma_d(d: i64, k: usize) -> Partition {
    let mut hs = vec![];
    for i in 0..3 {
        let mut e = vec![0; 3];
        e[i] = 1;
        hs.push(Halfspace::from_i64(&e, 0));
    }
    hs.push(Halfspace::from_i64(&[-1, -1, -1], d));
    let delta = LatticePolytope::from_halfspaces(3, &hs).unwrap();
    let m: Vec<i64> = (0..3).map(|i| if i < k { 1 } else { 0 }).collect();
    let offsets: Vec<BigInt> = (1..d).map(BigInt::from).collect();
    Partition::from_hyperplanes(delta, &lv(&m), &offsets).unwrap()
}

pub fn weighted_delta() -> LatticePolytope {
    let e0 = [-1i64; 4];
    let mut pts = vec![e0.to_vec()];
    for (i, k) in [(0usize, 8i64), (1, 4), (2, 4), (3, 4)] {
        let mut v = e0.to_vec();
        v[i] += k;
        pts.push(v);
    }
    let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
    poly(&refs)
}

pub fn weighted() -> Result<Partition, toricdegen::PartitionError> {
    Partition::from_fan_rays(weighted_delta(), &sigma_rays(4))
}

/// The same pieces without the simple-polytope requirement.
pub fn weighted_lenient() -> Partition {
    let delta = weighted_delta();
    let pieces = Partition::fan_pieces(&delta, &sigma_rays(4)).unwrap();
    Partition::new_lenient(delta, pieces).unwrap()
}

pub fn triangle3() -> LatticePolytope {
    poly(&[&[0, 0], &[3, 0], &[0, 3]])
}

pub fn triptych() -> [Result<Partition, toricdegen::PartitionError>; 3] {
    [
        Partition::from_pieces(
            triangle3(),
            &pieces(&[&[&[0, 0], &[2, 0], &[0, 2]], &[&[2, 0], &[3, 0], &[0, 3], &[0, 2]]]),
        ),
        Partition::from_pieces(
            triangle3(),
            &pieces(&[
                &[&[0, 0], &[1, 0], &[1, 1], &[0, 2]],
                &[&[1, 0], &[3, 0], &[2, 1], &[1, 1]],
                &[&[1, 1], &[2, 1], &[0, 3], &[0, 2]],
            ]),
        ),
        Partition::from_pieces(
            triangle3(),
            &pieces(&[
                &[&[0, 0], &[1, 0], &[1, 1], &[0, 3]],
                &[&[0, 3], &[1, 1], &[1, 2]],
                &[&[1, 0], &[3, 0], &[1, 2]],
            ]),
        ),
    ]
}

pub fn octagon() -> LatticePolytope {
    poly(&[&[0, 2], &[1, 1], &[3, 1], &[4, 2], &[4, 3], &[3, 4], &[1, 4], &[0, 3]])
}

pub fn octagon_cut() -> Partition {
    Partition::from_hyperplanes(octagon(), &lv(&[1, 0]), &[BigInt::from(2)]).unwrap()
}

pub fn segment_cut(len: i64, cuts: &[i64]) -> Partition {
    let seg = poly(&[&[0], &[len]]);
    Partition::from_hyperplanes(seg, &lv(&[1]), &cuts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()).unwrap()
}

pub fn expanded_line(l: i64) -> Partition {
    let line = LatticePolytope::from_halfspaces(1, &[]).unwrap();
    Partition::from_hyperplanes(line, &lv(&[1]), &(0..=l).map(BigInt::from).collect::<Vec<_>>()).unwrap()
}

pub fn open_space(n: usize) -> Partition {
    let whole = LatticePolytope::from_halfspaces(n, &[]).unwrap();
    Partition::from_fan_rays(whole, &sigma_rays(n)).unwrap()
}

/// Every partition the acceptance suite expects to be accepted.
pub fn corpus() -> Vec<(String, Arc<Partition>)> {
    let [a, b, _] = triptych();
    let mut out: Vec<(String, Partition)> = vec![
        ("triptych (a)".into(), a.unwrap()),
        ("triptych (b)".into(), b.unwrap()),
        ("octagon".into(), octagon_cut()),
        ("segment [0,4]".into(), segment_cut(4, &[1, 2, 3])),
        ("segment [0,5] uneven".into(), segment_cut(5, &[2, 3])),
        ("expanded line".into(), expanded_line(3)),
        ("open plane".into(), open_space(2)),
        ("open space".into(), open_space(3)),
    ];
    for n in 2..=4 {
        out.push((format!("Gamma({n})"), gamma_n(n)));
    }
    for k in 1..=3 {
        out.push((format!("Gamma_4^{k}"), gamma_d(4, k)));
    }
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}
