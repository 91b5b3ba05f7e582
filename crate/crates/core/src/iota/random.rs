//! Seeded random iota-complexes with at most five generators.
//!
//! A complex starts in reduced form (one free generator plus up to two pairs
//! `∂x = U^k y`), is conjugated by a random homogeneous unipotent basis
//! change and has its generators shuffled. The involution is `id + F` for a
//! random degree-0 chain map `F`, kept only if `ι² ≃ id`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, F2Matrix, Rational};

use super::complex::IotaComplex;
use super::model::{chain_map_basis, iota_squared_homotopic, ValidatedIota};

const OFFSETS: [(i64, i64); 6] = [(0, 1), (0, 1), (1, 2), (-1, 4), (3, 4), (-2, 3)];
const IOTA_ATTEMPTS: usize = 32;

pub fn random_iota_complex_seeded(seed: u64) -> IotaComplex {
    random_iota_complex(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_iota_complex<R: Rng>(rng: &mut R) -> IotaComplex {
    let (offset_n, offset_d) = OFFSETS[rng.gen_range(0..OFFSETS.len())];
    let offset = rat(offset_n, offset_d);
    let grading = |g: i64| &Rational::integer(g) + &offset;

    let mut gradings = vec![grading(2 * rng.gen_range(-2i64..=2))];
    let mut pairs = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let k: i64 = rng.gen_range(0..=4);
        let y = rng.gen_range(-3i64..=4);
        gradings.push(grading(y));
        gradings.push(grading(y - 2 * k + 1));
        pairs.push((gradings.len() - 1, gradings.len() - 2));
    }
    let n = gradings.len();
    let mut d = F2Matrix::zeros(n, n);
    for &(x, y) in &pairs {
        d.set(y, x, true);
    }

    // unipotent change of basis built from homogeneous elementary moves
    let mut p = F2Matrix::identity(n);
    for _ in 0..rng.gen_range(0..=2 * n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b
            || (&gradings[a] - &gradings[b])
                .half_nonneg_integer()
                .is_none()
        {
            continue;
        }
        let mut e = F2Matrix::identity(n);
        e.set(a, b, true);
        p = e.mul(&p).expect("square");
    }
    let p_inv = p.inverse().expect("unipotent");
    let d = p_inv.mul(&d).and_then(|m| m.mul(&p)).expect("square");

    let iota = random_iota(rng, &gradings, &d);
    let names = (0..n).map(|i| format!("g{i}")).collect();
    let base = ValidatedIota::from_parts(names, gradings, d, iota)
        .expect("random complex is an iota-complex")
        .to_iota_complex();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    base.permuted(&order).expect("permutation")
}

fn random_iota<R: Rng>(rng: &mut R, gradings: &[Rational], d: &F2Matrix) -> F2Matrix {
    let n = gradings.len();
    let id = F2Matrix::identity(n);
    if rng.gen_bool(0.15) {
        return id;
    }
    let basis = chain_map_basis(gradings, d);
    for _ in 0..IOTA_ATTEMPTS {
        let mut iota = id.clone();
        for f in &basis {
            if rng.gen_bool(0.5) {
                iota = iota.add(f);
            }
        }
        if iota_squared_homotopic(gradings, d, &iota) {
            return iota;
        }
    }
    id
}
