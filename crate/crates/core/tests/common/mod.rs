//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use verba::group::{cyclic_table, dihedral_table, ElementId, FiniteGroup};
use verba::verbal::WordTemplate;
use verba::Word;

/// Truncated noncommutative polynomials over the generators, as monomial -> coefficient.
pub type Poly = BTreeMap<Vec<u32>, i64>;

fn poly_mul(a: &Poly, b: &Poly, degree: usize) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if ma.len() + mb.len() > degree {
                continue;
            }
            let mut m = ma.clone();
            m.extend_from_slice(mb);
            *out.entry(m).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Magnus image of `w`, multiplying one letter at a time.
pub fn magnus_oracle(w: &Word, degree: usize) -> Poly {
    let mut acc = Poly::from([(vec![], 1)]);
    for l in w.letters() {
        let g = l.generator();
        let mut factor = Poly::from([(vec![], 1)]);
        if l.is_inverse() {
            for k in 1..=degree {
                factor.insert(vec![g; k], if k % 2 == 0 { 1 } else { -1 });
            }
        } else {
            factor.insert(vec![g], 1);
        }
        acc = poly_mul(&acc, &factor, degree);
    }
    acc
}

/// All values of `t` on `g` and their inverses, by direct evaluation.
pub fn brute_w_words(g: &FiniteGroup, t: &WordTemplate) -> BTreeSet<ElementId> {
    let vars = t.variables();
    let order = g.order() as u64;
    let total = order.pow(vars.len() as u32);
    let mut out = BTreeSet::new();
    for code in 0..total {
        let mut c = code;
        let mut assignment = BTreeMap::new();
        for v in vars {
            assignment.insert(*v, (c % order) as ElementId);
            c /= order;
        }
        let e = g.eval(t.body(), |gen| assignment.get(&gen).copied()).unwrap();
        out.insert(e);
        out.insert(g.inverse(e));
    }
    out
}

/// Level sets of iterated products `S_{k+1} = S_k . W`, as distances.
pub fn closure_levels(g: &FiniteGroup, words: &BTreeSet<ElementId>) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.order()];
    dist[g.identity() as usize] = Some(0);
    let mut current: BTreeSet<ElementId> = BTreeSet::from([g.identity()]);
    let mut k = 0;
    loop {
        k += 1;
        let next: BTreeSet<ElementId> = current
            .iter()
            .flat_map(|&a| words.iter().map(move |&w| (a, w)))
            .map(|(a, w)| g.mul(a, w))
            .collect();
        let mut grew = false;
        for &e in &next {
            if dist[e as usize].is_none() {
                dist[e as usize] = Some(k);
                grew = true;
            }
        }
        if !grew {
            return dist;
        }
        current = next;
    }
}

/// Every registered group of order at most 60.
pub fn small_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = ["S3", "S4", "A4", "A5", "SL2_3"]
        .iter()
        .map(|s| FiniteGroup::load(s).unwrap())
        .collect();
    for n in 3..=30 {
        out.push(FiniteGroup::from_table(&format!("D{n}"), dihedral_table(n)).unwrap());
    }
    out.push(FiniteGroup::from_table("C6", cyclic_table(6)).unwrap());
    out
}
