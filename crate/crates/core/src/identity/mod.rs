//! Commutator identities and certificate-producing rewrites in free groups.

mod certificate;
mod rewrites;

pub use certificate::{Factor, FactorKind, Operand, RewriteCertificate};
pub use rewrites::{
    culler_certificate, culler_chain_xy2, culler_cover_shape, culler_identity, culler_power_certificate,
    gamma3_triangle, hall_witt_split, herd_powers, oddball_power, oddball_step, rotate_product,
    square_to_gamma3, telescope_line,
};

use crate::error::{Error, Result};
use crate::word::{Substitution, Word};

/// Equality in the free group.
pub fn verify_identity(lhs: &Word, rhs: &Word) -> bool {
    lhs.mul(&rhs.inverse()).is_identity()
}

/// Number of variables (`x1, x2, ...`) used by each base identity.
pub fn base_identity_arity(id: u8) -> Result<usize> {
    match id {
        1 | 2 => Ok(2),
        3..=5 => Ok(3),
        _ => Err(Error::InvalidArgument(format!("base identity id must be 1..5, got {id}"))),
    }
}

/// Every displayed form of a base identity, first to last; consecutive
/// entries are equal in the free group on `x1, x2, x3`.
fn chain_generic(id: u8) -> Result<Vec<Word>> {
    let (x, y, z) = (Word::generator(1), Word::generator(2), Word::generator(3));
    let c = |a: &Word, b: &Word| a.commutator(b);
    Ok(match id {
        1 => vec![c(&x, &y), c(&y.conjugate(&x), &x.inverse())],
        2 => vec![c(&x, &y).inverse(), c(&y, &x), c(&x.conjugate(&y), &y.inverse())],
        3 => vec![
            c(&x, &y.mul(&z)),
            c(&x, &y).mul(&c(&x, &z).conjugate(&y)),
            c(&x, &y).mul(&c(&x, &z)).mul(&c(&c(&z, &x), &y)),
        ],
        4 => vec![
            c(&x.mul(&y), &z),
            c(&x, &z).mul(&c(&y, &z).conjugate(&x.conjugate(&z))),
            c(&x, &z).mul(&c(&y, &z)).mul(&c(&c(&z, &y), &x.conjugate(&z))),
        ],
        5 => vec![
            c(&c(&y, &x), &z.conjugate(&x))
                .mul(&c(&c(&x, &z), &y.conjugate(&z)))
                .mul(&c(&c(&z, &y), &x.conjugate(&y))),
            Word::identity(),
        ],
        _ => return Err(Error::InvalidArgument(format!("base identity id must be 1..5, got {id}"))),
    })
}

/// All forms of base identity `id` under `bindings`.
pub fn identity_chain(id: u8, bindings: &Substitution) -> Result<Vec<Word>> {
    chain_generic(id)?.iter().map(|w| w.substitute(bindings)).collect()
}

/// First and second form of base identity `id` under `bindings`.
pub fn base_identity(id: u8, bindings: &Substitution) -> Result<(Word, Word)> {
    let chain = identity_chain(id, bindings)?;
    Ok((chain[0].clone(), chain[1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::Alphabet;

    fn gens() -> (Word, Word, Word) {
        (Word::generator(1), Word::generator(2), Word::generator(3))
    }

    #[test]
    fn base_identities_hold() {
        let sigma = Substitution::from_images((1..=3).map(Word::generator).collect());
        for id in 1..=5 {
            let chain = identity_chain(id, &sigma).unwrap();
            for pair in chain.windows(2) {
                assert!(verify_identity(&pair[0], &pair[1]), "identity {id}");
            }
        }
        assert!(base_identity(6, &sigma).is_err());
        let partial = Substitution::new().with(1, Word::generator(1));
        assert!(matches!(base_identity(1, &partial), Err(Error::MissingBinding(_))));
    }

    #[test]
    fn degenerate_binding() {
        let (x, _, z) = gens();
        let sigma = Substitution::new().with(1, x.clone()).with(2, Word::identity()).with(3, z.clone());
        let (l, r) = base_identity(3, &sigma).unwrap();
        assert_eq!(l, x.commutator(&z));
        assert!(verify_identity(&l, &r));
    }

    #[test]
    fn culler_and_noncommuting() {
        let (l, r) = culler_identity();
        assert!(verify_identity(&l, &r));
        let (x, y, _) = gens();
        assert!(!verify_identity(&x.mul(&y), &y.mul(&x)));
        assert!(culler_certificate().verify());
        assert!(culler_cover_shape().verify());
    }

    #[test]
    fn herd_small_cases() {
        let (x, y, _) = gens();
        let c1 = herd_powers(&x, &y, 1).unwrap();
        assert_eq!(c1.factors.len(), 1);
        assert!(c1.verify());
        let c2 = herd_powers(&x, &y, 2).unwrap();
        assert_eq!(c2.count_of("COMMUTATOR"), 1);
        assert_eq!(c2.factors[0].base, x.mul(&y).pow(2));
        assert!(c2.verify());
        assert!(herd_powers(&x, &y, 0).is_err());
    }

    #[test]
    fn rotate_example() {
        let (x, y, _) = gens();
        let c = rotate_product(&[x.clone(), y.clone()], 2).unwrap();
        assert!(c.verify());
        assert_eq!(c.factors[0].base, x.pow(2));
        assert_eq!(c.factors.len(), 3);
    }

    #[test]
    fn telescope_examples() {
        let (x, y, z) = gens();
        let c = telescope_line(&[x.clone()], &[2], &[5]).unwrap();
        assert!(c.verify());
        assert_eq!(c.factors[0].base, x.pow(3));
        let same = telescope_line(&[x.clone(), y.clone(), z.clone()], &[1, -2, 3], &[1, -2, 3]).unwrap();
        assert!(same.target.is_identity() && same.verify());
        assert!(telescope_line(&[x], &[1, 2], &[1]).is_err());
    }

    #[test]
    fn square_to_gamma3_counts() {
        let (x, y, z) = gens();
        let b = y.commutator(&z);
        let c1 = square_to_gamma3(&x, &b, 1).unwrap();
        assert!(c1.verify());
        assert_eq!(c1.factors[0].base, x.pow(2).commutator(&b));
        assert_eq!(c1.count_of("GAMMA_N_WORD[3]"), 1);
        let c3 = square_to_gamma3(&x, &b, 3).unwrap();
        assert!(c3.verify());
        assert_eq!(c3.count_of("GAMMA_N_WORD[3]"), 7);
        assert!(c3.notes.is_empty());
        let empty = square_to_gamma3(&Word::identity(), &b, 2).unwrap();
        assert!(empty.factors.is_empty() && empty.verify());
        assert!(!square_to_gamma3(&x, &y, 1).unwrap().notes.is_empty());
    }

    #[test]
    fn triangle_examples() {
        let (x, y, _) = gens();
        assert!(gamma3_triangle(&x, &y, 1).unwrap().factors.is_empty());
        let c2 = gamma3_triangle(&x, &y, 2).unwrap();
        assert_eq!(c2.target, x.commutator(&y).conjugate(&x));
        assert!(c2.verify());
        assert_eq!(c2.factors.len(), 1);
        let c5 = gamma3_triangle(&x.mul(&y), &y.pow(-2), 5).unwrap();
        assert!(c5.verify());
        assert_eq!(c5.count_of("COMMUTATOR"), 10);
    }

    #[test]
    fn hall_witt_examples() {
        let g = Word::generator(1);
        let (s, t, u, v) = (Word::generator(2), Word::generator(3), Word::generator(4), Word::generator(5));
        let c = hall_witt_split(&g, &Operand::Bracket(s.clone(), t.clone()), &Operand::Bracket(u, v)).unwrap();
        assert!(c.verify());
        assert_eq!(c.count_of("BETA2_WORD"), 2);
        let same = hall_witt_split(&g, &Operand::Plain(s.clone()), &Operand::Plain(s.clone())).unwrap();
        assert!(same.target.is_identity() && same.factors.is_empty());
        let plain = hall_witt_split(&g, &Operand::Plain(s), &Operand::Plain(t)).unwrap();
        assert!(plain.verify());
        assert_eq!(plain.count_of("RAW"), 2);
    }

    #[test]
    fn oddball_examples() {
        let (x, y, z) = gens();
        assert!(oddball_step(&x, &y, &z, 1).unwrap().verify());
        for n in 1..=8 {
            let c = oddball_power(&x, &y, &z, n).unwrap();
            assert!(c.verify(), "n = {n}");
            assert_eq!(c.count_of("BETA2_WORD"), n as usize - 1);
        }
        let flat = oddball_step(&x, &y, &y, 2).unwrap();
        assert!(flat.target.is_identity() && flat.verify());
    }

    #[test]
    fn culler_chain() {
        let c = culler_chain_xy2();
        assert_eq!(c.factors.len(), 5);
        assert!(c.verify());
        assert_eq!(c.count_of("W_WORD"), 5);
        for k in 1..=4 {
            assert!(culler_power_certificate(k).unwrap().verify(), "k = {k}");
        }
    }

    #[test]
    fn text_round_trip() {
        let mut alphabet = Alphabet::with_names(&["x", "y", "z"]);
        let (x, y, z) = gens();
        for cert in [
            culler_chain_xy2(),
            square_to_gamma3(&x, &y.commutator(&z), 2).unwrap(),
            oddball_power(&x, &y, &z, 3).unwrap(),
            telescope_line(&[x.clone(), y.clone()], &[1, 2], &[3, -1]).unwrap(),
        ] {
            let text = cert.to_text(&alphabet);
            let back = RewriteCertificate::from_text(&text, &mut alphabet).unwrap();
            assert_eq!(back.to_text(&alphabet), text);
            assert!(back.verify());
        }
        let tampered = culler_certificate().to_text(&alphabet).replace("COMMUTATOR=2", "COMMUTATOR=3");
        assert!(RewriteCertificate::from_text(&tampered, &mut alphabet).is_err());
    }

    #[test]
    fn broken_witness_is_rejected() {
        let mut c = culler_certificate();
        c.factors[0].base = Word::generator(1);
        assert!(c.check().is_err());
    }
}
