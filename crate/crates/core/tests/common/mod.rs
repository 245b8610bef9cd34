#![allow(dead_code)]

use flatdef::scalar::Scalar;
use flatdef::surface::{l_shape, square_tiled, Permutation, TranslationSurface};

pub fn origami(h: &str, v: &str, n: usize) -> TranslationSurface {
    square_tiled(&Permutation::from_cycles(n, h).unwrap(), &Permutation::from_cycles(n, v).unwrap()).unwrap()
}

pub fn torus() -> TranslationSurface {
    origami("", "", 1).with_label(Some("torus".into()))
}

pub fn l_origami() -> TranslationSurface {
    origami("(1 2)", "(1 3)", 3).with_label(Some("3-square L".into()))
}

pub fn marked_torus() -> TranslationSurface {
    origami("(1 2)", "", 2).with_label(Some("torus with two marked points".into()))
}

pub fn phi() -> Scalar {
    Scalar::quad(1, 2, 1, 2, 5)
}

pub fn golden_l() -> TranslationSurface {
    let one = Scalar::one();
    l_shape(&phi(), &one, &one, &(&phi() - &one)).unwrap().with_label(Some("golden L".into()))
}

/// Horizontal moduli 1/2 and √2.
pub fn sqrt2_l() -> TranslationSurface {
    let one = Scalar::one();
    l_shape(&Scalar::from_int(2), &one, &one, &Scalar::quad(0, 1, 1, 1, 2)).unwrap().with_label(Some("sqrt2 L".into()))
}

pub fn square_tiled_fixtures() -> Vec<TranslationSurface> {
    vec![torus(), l_origami(), marked_torus()]
}

pub fn all_fixtures() -> Vec<TranslationSurface> {
    vec![torus(), l_origami(), golden_l(), marked_torus(), sqrt2_l()]
}
