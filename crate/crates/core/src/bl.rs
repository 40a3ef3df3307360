//! The representative-based matching obtained by factoring a morphism
//! through its image: a surjection is matched birth-by-birth, an
//! injection death-by-death, and the composite gives the matching of an
//! arbitrary morphism.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::ladder::{LadderMorphism, Matching};
use crate::matrix::Matrix;
use crate::module::{IndexedInterval, IntervalKey, PersistenceModule};
use crate::subspace;

/// Factor alpha: V -> U as gamma ∘ beta with beta: V -> im(alpha)
/// surjective and gamma: im(alpha) -> U injective. Returns
/// (image module, beta, gamma).
pub fn image_factorization(
    alpha: &LadderMorphism,
) -> Result<(PersistenceModule, LadderMorphism, LadderMorphism), Error> {
    let n = alpha.len();
    let p = alpha.modulus();
    let images: Vec<_> = (1..=n).map(|i| subspace::image(alpha.component(i))).collect();
    let dims: Vec<usize> = images.iter().map(|s| s.dim()).collect();

    // structure maps: f^U_i restricted to im(alpha_i), in image bases
    let mut maps = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let mut m = Matrix::zeros(dims[i], dims[i - 1], p);
        for j in 0..dims[i - 1] {
            let pushed = alpha.target().map_at(i).apply_vec(images[i - 1].basis().row(j));
            let coords = images[i]
                .coords(&pushed)
                .expect("commutativity keeps the image invariant");
            for (r, c) in coords.into_iter().enumerate() {
                m.set(r, j, c);
            }
        }
        maps.push(m);
    }
    let image_module = PersistenceModule::new(dims.clone(), maps, p)?;

    // beta_i: columns of alpha_i expressed in the image basis
    let mut betas = Vec::with_capacity(n);
    for i in 1..=n {
        let src_dim = alpha.source().dims()[i - 1];
        let mut m = Matrix::zeros(dims[i - 1], src_dim, p);
        for j in 0..src_dim {
            let mut e = vec![0u32; src_dim];
            e[j] = 1;
            let coords = images[i - 1]
                .coords(&alpha.component(i).apply_vec(&e))
                .expect("alpha lands in its image");
            for (r, c) in coords.into_iter().enumerate() {
                m.set(r, j, c);
            }
        }
        betas.push(m);
    }
    let beta = LadderMorphism::new(alpha.source().clone(), image_module.clone(), betas)?;

    // gamma_i: image basis vectors as columns
    let gammas = images.iter().map(|s| s.basis().transpose()).collect();
    let gamma = LadderMorphism::new(image_module.clone(), alpha.target().clone(), gammas)?;
    Ok((image_module, beta, gamma))
}

/// A partial bijection between the canonical representation sets of two
/// barcodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMatching {
    source_set: Vec<IndexedInterval>,
    target_set: Vec<IndexedInterval>,
    pairs: BTreeMap<IndexedInterval, IndexedInterval>,
}

impl SetMatching {
    pub fn pairs(&self) -> &BTreeMap<IndexedInterval, IndexedInterval> {
        &self.pairs
    }

    pub fn source_set(&self) -> &[IndexedInterval] {
        &self.source_set
    }

    pub fn target_set(&self) -> &[IndexedInterval] {
        &self.target_set
    }

    pub fn get(&self, x: IndexedInterval) -> Option<IndexedInterval> {
        self.pairs.get(&x).copied()
    }

    pub fn matched_count(&self) -> usize {
        self.pairs.len()
    }

    /// Composite partial bijection: x -> other(self(x)) where both legs
    /// are defined.
    pub fn compose(&self, other: &SetMatching) -> SetMatching {
        let pairs = self
            .pairs
            .iter()
            .filter_map(|(&x, &y)| other.get(y).map(|z| (x, z)))
            .collect();
        SetMatching {
            source_set: self.source_set.clone(),
            target_set: other.target_set.clone(),
            pairs,
        }
    }

    /// Forget the copy indices, keeping interval-pair multiplicities.
    pub fn to_matching(&self, n: usize) -> Matching {
        let mut values: BTreeMap<(IntervalKey, IntervalKey), usize> = BTreeMap::new();
        for (x, y) in &self.pairs {
            *values.entry((x.key, y.key)).or_insert(0) += 1;
        }
        Matching::from_values(n, values)
    }
}

impl fmt::Display for SetMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &x in &self.source_set {
            if !first {
                writeln!(f)?;
            }
            first = false;
            match self.get(x) {
                Some(y) => write!(f, "{x} -> {y}")?,
                None => write!(f, "{x} -> unmatched")?,
            }
        }
        Ok(())
    }
}

/// Matching induced by an injective morphism: for each death index b, the
/// intervals dying at b on either side are listed in canonical order
/// (birth ascending, then copy) and paired positionally. Injectivity
/// guarantees the source list is never longer.
pub fn injective_matching(gamma: &LadderMorphism) -> Result<SetMatching, Error> {
    for i in 1..=gamma.len() {
        if subspace::kernel(gamma.component(i)).dim() > 0 {
            return Err(Error::NotInjective(i));
        }
    }
    let src = gamma.source().diagram();
    let tgt = gamma.target().diagram();
    let source_set = src.representation_set();
    let target_set = tgt.representation_set();
    let mut pairs = BTreeMap::new();
    for b in 1..=gamma.len() {
        let sv: Vec<_> = source_set.iter().filter(|x| x.key.b == b).collect();
        let tv: Vec<_> = target_set.iter().filter(|x| x.key.b == b).collect();
        debug_assert!(sv.len() <= tv.len(), "injective: source slice fits");
        for (x, y) in sv.into_iter().zip(tv) {
            pairs.insert(*x, *y);
        }
    }
    Ok(SetMatching { source_set, target_set, pairs })
}

/// Matching induced by a surjective morphism: for each birth index a, the
/// intervals born at a on either side are listed in canonical order
/// (death descending, then copy) and paired positionally. Surjectivity
/// guarantees the target list is never longer.
pub fn surjective_matching(beta: &LadderMorphism) -> Result<SetMatching, Error> {
    for i in 1..=beta.len() {
        if subspace::image(beta.component(i)).dim() < beta.target().dims()[i - 1] {
            return Err(Error::NotSurjective(i));
        }
    }
    let src = beta.source().diagram();
    let tgt = beta.target().diagram();
    let source_set = src.representation_set();
    let target_set = tgt.representation_set();
    let mut pairs = BTreeMap::new();
    for a in 1..=beta.len() {
        let sv: Vec<_> = source_set.iter().filter(|x| x.key.a == a).collect();
        let tv: Vec<_> = target_set.iter().filter(|x| x.key.a == a).collect();
        debug_assert!(tv.len() <= sv.len(), "surjective: target slice fits");
        for (x, y) in sv.into_iter().zip(tv) {
            pairs.insert(*x, *y);
        }
    }
    Ok(SetMatching { source_set, target_set, pairs })
}

/// The matching of an arbitrary morphism: factor through the image and
/// compose the surjective-leg matching with the injective-leg matching.
pub fn bl_matching(alpha: &LadderMorphism) -> Result<SetMatching, Error> {
    let (_, beta, gamma) = image_factorization(alpha)?;
    let lam = surjective_matching(&beta)?;
    let iot = injective_matching(&gamma)?;
    Ok(lam.compose(&iot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeModulus;

    fn f2() -> PrimeModulus {
        PrimeModulus::two()
    }

    fn example_v() -> PersistenceModule {
        let p = f2();
        let f1 = Matrix::zeros(3, 0, p);
        let f2m = Matrix::from_int_rows(3, &[&[1, 0, 0], &[0, 0, 1]], p);
        PersistenceModule::new(vec![0, 3, 2], vec![f1, f2m], p).unwrap()
    }

    fn example_u() -> PersistenceModule {
        let p = f2();
        let f1 = Matrix::from_int_rows(2, &[&[1, 0], &[0, 0], &[0, 1]], p);
        let f2m = Matrix::from_int_rows(3, &[&[0, 1, 0]], p);
        PersistenceModule::new(vec![2, 3, 1], vec![f1, f2m], p).unwrap()
    }

    fn example_alpha() -> LadderMorphism {
        let p = f2();
        let a1 = Matrix::zeros(2, 0, p);
        let a2 = Matrix::from_int_rows(3, &[&[1, 0, 0], &[1, 0, 0], &[0, 0, 1]], p);
        let a3 = Matrix::from_int_rows(2, &[&[1, 0]], p);
        LadderMorphism::new(example_v(), example_u(), vec![a1, a2, a3]).unwrap()
    }

    fn key(a: usize, b: usize) -> IntervalKey {
        IntervalKey::new(a, b)
    }

    fn ii(a: usize, b: usize, copy: usize) -> IndexedInterval {
        IndexedInterval { key: key(a, b), copy }
    }

    #[test]
    fn image_factorization_of_worked_example() {
        let (im, beta, gamma) = image_factorization(&example_alpha()).unwrap();
        assert_eq!(im.dims(), &[0, 2, 1]);
        let d = im.diagram();
        assert_eq!(d.get(2, 2), 1);
        assert_eq!(d.get(2, 3), 1);
        // composite gamma ∘ beta recovers alpha
        for i in 1..=3 {
            let comp = gamma.component(i).mul(beta.component(i));
            assert_eq!(&comp, example_alpha().component(i));
        }
    }

    #[test]
    fn surjective_leg_of_worked_example() {
        let (_, beta, _) = image_factorization(&example_alpha()).unwrap();
        let lam = surjective_matching(&beta).unwrap();
        assert_eq!(lam.get(ii(2, 3, 1)), Some(ii(2, 3, 1)));
        assert_eq!(lam.get(ii(2, 3, 2)), Some(ii(2, 2, 1)));
        assert_eq!(lam.get(ii(2, 2, 1)), None);
        assert_eq!(lam.matched_count(), 2);
    }

    #[test]
    fn injective_leg_of_worked_example() {
        let (_, _, gamma) = image_factorization(&example_alpha()).unwrap();
        let iot = injective_matching(&gamma).unwrap();
        assert_eq!(iot.get(ii(2, 2, 1)), Some(ii(1, 2, 1)));
        assert_eq!(iot.get(ii(2, 3, 1)), Some(ii(2, 3, 1)));
        assert_eq!(iot.matched_count(), 2);
    }

    #[test]
    fn composite_matching_of_worked_example() {
        let sigma = bl_matching(&example_alpha()).unwrap();
        assert_eq!(sigma.get(ii(2, 3, 1)), Some(ii(2, 3, 1)));
        assert_eq!(sigma.get(ii(2, 3, 2)), Some(ii(1, 2, 1)));
        assert_eq!(sigma.get(ii(2, 2, 1)), None);
        assert_eq!(sigma.matched_count(), 2);
    }

    #[test]
    fn variant_alpha_gives_same_set_matching() {
        // changing alpha_2's third row to [0,1,0] leaves this matching
        // unchanged, though the basis-independent matching moves
        let p = f2();
        let a1 = Matrix::zeros(2, 0, p);
        let a2 = Matrix::from_int_rows(3, &[&[1, 0, 0], &[1, 0, 0], &[0, 1, 0]], p);
        let a3 = Matrix::from_int_rows(2, &[&[1, 0]], p);
        let variant = LadderMorphism::new(example_v(), example_u(), vec![a1, a2, a3]).unwrap();
        assert_eq!(bl_matching(&variant).unwrap(), bl_matching(&example_alpha()).unwrap());
    }

    #[test]
    fn legs_reject_wrong_shape() {
        let alpha = example_alpha();
        assert!(matches!(injective_matching(&alpha), Err(Error::NotInjective(_))));
        assert!(matches!(surjective_matching(&alpha), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn identity_matches_everything() {
        let v = example_v();
        let sigma = bl_matching(&LadderMorphism::identity(&v)).unwrap();
        assert_eq!(sigma.matched_count(), 3);
        for &x in sigma.source_set() {
            assert_eq!(sigma.get(x), Some(x));
        }
    }

    #[test]
    fn display_with_unmatched() {
        let sigma = bl_matching(&example_alpha()).unwrap();
        let s = sigma.to_string();
        assert_eq!(
            s,
            "[2,3]#1 -> [2,3]#1\n[2,3]#2 -> [1,2]#1\n[2,2]#1 -> unmatched"
        );
    }
}
