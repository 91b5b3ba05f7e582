//! Small hand-checkable iota-complexes.

use crate::algebra::rat;

use super::complex::IotaComplex;

/// The model of `S³`: one generator in grading 0, `ι = id`.
pub fn s3() -> IotaComplex {
    IotaComplex::builder()
        .generator("a", rat(0, 1))
        .iota("a", &[("a", 0)])
        .build()
        .expect("fixture")
}

/// `∂f = e₁ + e₂`, with `ι` swapping `e₁` and `e₂`.
pub fn swap() -> IotaComplex {
    IotaComplex::builder()
        .generator("e1", rat(0, 1))
        .generator("e2", rat(0, 1))
        .generator("f", rat(1, 1))
        .differential("f", &[("e1", 0), ("e2", 0)])
        .iota("e1", &[("e2", 0)])
        .iota("e2", &[("e1", 0)])
        .iota("f", &[("f", 0)])
        .build()
        .expect("fixture")
}

/// `a` free in grading 0, `∂b = U²c`, `ι(a) = a + Uc`; the local model of
/// the figure-eight knot's `-1` surgery, with `(d̲, d, d̄) = (-2, 0, 0)`.
pub fn figure_eight_like() -> IotaComplex {
    IotaComplex::builder()
        .generator("a", rat(0, 1))
        .generator("b", rat(-1, 1))
        .generator("c", rat(2, 1))
        .differential("b", &[("c", 2)])
        .iota("a", &[("a", 0), ("c", 1)])
        .iota_identity_elsewhere()
        .build()
        .expect("fixture")
}

/// Every named fixture, for sweeps.
pub fn all() -> Vec<(&'static str, IotaComplex)> {
    vec![
        ("s3", s3()),
        ("swap", swap()),
        ("figure-eight-like", figure_eight_like()),
    ]
}
