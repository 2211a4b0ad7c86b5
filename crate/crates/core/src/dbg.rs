//! temporary: search the general suspension twist
use crate::simplicial::{CellId, SimplicialComplex};
use crate::tensor::*;
use crate::Rat;

fn q(d: usize) -> usize { (d * d.wrapping_sub(1) / 2) % 2 }

pub fn seed_with(
    complex: &SimplicialComplex,
    strict: bool,
    n_max: usize,
    u: (usize, usize, usize), // alpha(d) = u0 + u1*d + u2*q(d)
    v: (usize, usize, usize), // e(dx,dy) = dx + v0*dx*dy + v1*q(dx) + v2*q(dy)
) -> Structure {
    let aw = complex.aw_coproduct();
    let cop = if strict { aw } else { aw.symmetrize(complex) };
    let mut s = Structure::empty(complex.cell_count(), n_max);
    let mut d1 = vec![Vec::new(); complex.cell_count()];
    for c in complex.cells() {
        let d = complex.dim_of(c);
        let a = (u.0 + u.1 * d + u.2 * q(d)) % 2;
        let twist = if a == 1 { -1 } else { 1 };
        for (f, k) in complex.boundary_chain(c) {
            d1[c.idx()].push((vec![f], k * crate::rat(twist, 1)));
        }
    }
    s.components.insert(1, d1);
    let mut d2 = vec![Vec::new(); complex.cell_count()];
    for c in complex.cells() {
        for (y, x, k) in cop.of(c) {
            let dx = complex.dim_of(*x);
            let dy = complex.dim_of(*y);
            let e = (dx + v.0 * dx * dy + v.1 * q(dx) + v.2 * q(dy)) % 2;
            let sign = if e == 1 { -1 } else { 1 };
            d2[c.idx()].push((vec![*x, *y], k * crate::rat(sign, 1)));
        }
    }
    s.components.insert(2, d2);
    s
}

fn square_ok(complex: &SimplicialComplex, s: &Structure, n: usize) -> bool {
    for cell in complex.cells() {
        for deg in 1..=n {
            let single = TensorWord::bare(vec![cell]);
            let once = derivation_on_bare(complex, s, &single, &crate::rat(1, 1), deg);
            let mut out = TensorElement::zero();
            for (w, c) in &once.terms {
                let piece = derivation_on_bare(complex, s, w, c, deg);
                for (w2, c2) in &piece.terms {
                    if w2.len() == deg {
                        out.add_term(w2.clone(), c2.clone(), usize::MAX);
                    }
                }
            }
            if !out.is_zero() { return false; }
        }
    }
    true
}

fn all_words(k: &SimplicialComplex, max_len: usize) -> Vec<TensorWord> {
    let cells: Vec<CellId> = k.cells().collect();
    let mut words = Vec::new();
    for len in 2..=max_len {
        let mut tuple = vec![0usize; len];
        loop {
            for sp in 0..len - 1 {
                words.push(TensorWord::co_inner(tuple.iter().map(|&i| cells[i]).collect(), sp));
            }
            let mut pos = 0;
            loop {
                tuple[pos] += 1;
                if tuple[pos] < cells.len() { break; }
                tuple[pos] = 0; pos += 1;
                if pos == len { break; }
            }
            if pos == len { break; }
        }
    }
    words
}
