//! Integer invariants of a shift and the flow equivalence and continuous
//! orbit equivalence verdicts they decide.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cohomology::{same_presentation, LocallyConstantFunction};
use crate::error::{Error, Result};
use crate::intlat::{det_sign, pointed_iso, Cokernel, FgAbelianGroup, PointedGroup, PointedIsomorphism};
use crate::sft::Presentation;
use crate::transducer::{
    equivalent_maps, default_delay_bound, is_eventual_conjugacy, is_strong_coe, transfer_psi,
    verify_orbit_relation, MapEquivalence, OrbitData, Transducer,
};

const POWER_STEPS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    /// `coker(I - A)`.
    pub bf_group: FgAbelianGroup,
    /// `coker(I - A^T)` marked with the class of `(1, ..., 1)`.
    pub k0_pointed: PointedGroup,
    pub det: BigInt,
    pub det_sign: i8,
    /// Bounds on the spectral radius from Collatz-Wielandt quotients.
    pub spectral_radius: (BigRational, BigRational),
}

pub fn invariants(p: &Presentation) -> InvariantReport {
    let a = p.adjacency_matrix();
    let ia = a.identity_minus();
    let bf_group = Cokernel::new(&ia).group().clone();
    let ones = vec![BigInt::one(); a.rows()];
    let k0_pointed = Cokernel::new(&ia.transpose()).pointed(&ones);
    let det = ia.determinant();
    let sign = det_sign(&ia);
    assert_eq!(sign == 0, bf_group.free_rank() > 0);
    InvariantReport {
        bf_group,
        k0_pointed,
        det,
        det_sign: sign,
        spectral_radius: spectral_bounds(p),
    }
}

fn spectral_bounds(p: &Presentation) -> (BigRational, BigRational) {
    let adj = p.adjacency();
    let n = adj.len();
    let mul = |v: &[BigInt]| -> Vec<BigInt> {
        (0..n)
            .map(|i| adj[i].iter().zip(v).map(|(&a, x)| x * BigInt::from(a)).sum())
            .collect()
    };
    let mut v = vec![BigInt::one(); n];
    for _ in 0..POWER_STEPS {
        let av = mul(&v);
        v = v.iter().zip(&av).map(|(x, y)| x + y).collect();
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_one() {
            v = v.iter().map(|x| x / &g).collect();
        }
    }
    let av = mul(&v);
    let ratios: Vec<BigRational> = av
        .into_iter()
        .zip(&v)
        .map(|(y, x)| BigRational::new(y, x.clone()))
        .collect();
    let lo = ratios.iter().min().expect("nonempty").clone();
    let hi = ratios.iter().max().expect("nonempty").clone();
    (lo, hi)
}

/// Decimal rendering with `digits` places, rounded towards `-inf` or `+inf`.
pub fn decimal(x: &BigRational, digits: u32, round_up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let (q, r) = n.abs().div_rem(&scale);
    format!("{sign}{q}.{:0>width$}", r.to_string(), width = digits as usize)
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bowen-franks: {}", self.bf_group)?;
        writeln!(f, "k0: {}", self.k0_pointed)?;
        writeln!(f, "det(I-A): {}", self.det)?;
        writeln!(f, "det-sign: {}", self.det_sign)?;
        write!(
            f,
            "spectral-radius: [{}, {}]",
            decimal(&self.spectral_radius.0, 6, false),
            decimal(&self.spectral_radius.1, 6, true)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct FlowVerdict {
    pub equivalent: bool,
    pub a: InvariantReport,
    pub b: InvariantReport,
}

/// Isomorphic Bowen-Franks groups and equal signs of `det(I - A)`.
pub fn flow_equivalent(pa: &Presentation, pb: &Presentation) -> FlowVerdict {
    let a = invariants(pa);
    let b = invariants(pb);
    FlowVerdict {
        equivalent: a.bf_group == b.bf_group && a.det_sign == b.det_sign,
        a,
        b,
    }
}

#[derive(Debug, Clone)]
pub struct CoeVerdict {
    pub verdict: Verdict,
    pub reason: String,
    pub isomorphism: Option<PointedIsomorphism>,
    pub a: InvariantReport,
    pub b: InvariantReport,
}

/// Pointed isomorphism of `coker(I - A^T)` together with equal signs of
/// `det(I - A)`.
pub fn coe_verdict(pa: &Presentation, pb: &Presentation) -> CoeVerdict {
    let a = invariants(pa);
    let b = invariants(pb);
    if a.det_sign != b.det_sign {
        return CoeVerdict {
            verdict: Verdict::No,
            reason: format!("det signs differ ({} vs {})", a.det_sign, b.det_sign),
            isomorphism: None,
            a,
            b,
        };
    }
    let iso = pointed_iso(&a.k0_pointed, &b.k0_pointed);
    let (verdict, reason) = match &iso {
        PointedIsomorphism::Yes(_) => (Verdict::Yes, "pointed K0 groups isomorphic, equal det signs".to_string()),
        PointedIsomorphism::No(r) => (Verdict::No, r.clone()),
        PointedIsomorphism::Undecided(r) => (Verdict::Undecided, r.clone()),
    };
    CoeVerdict {
        verdict,
        reason,
        isomorphism: Some(iso),
        a,
        b,
    }
}

/// A transducer-presented orbit equivalence `h: X_A -> X_B` with inverse.
#[derive(Debug, Clone)]
pub struct CoeWitness {
    pub forward: Transducer,
    pub forward_data: OrbitData,
    pub inverse: Transducer,
    pub inverse_data: OrbitData,
}

impl CoeWitness {
    /// Checks both orbit relations and that both compositions are identities.
    pub fn verify(&self) -> Result<()> {
        let (h, g) = (&self.forward, &self.inverse);
        if !same_presentation(h.codomain(), g.domain()) || !same_presentation(h.domain(), g.codomain()) {
            return Err(Error::DomainMismatch);
        }
        for (t, d, name) in [(h, &self.forward_data, "forward"), (g, &self.inverse_data, "inverse")] {
            if !verify_orbit_relation(t, d)?.holds() {
                return Err(Error::InvalidWitness(format!("{name} orbit relation fails")));
            }
        }
        for (t, name) in [(g.compose(h)?, "inverse after forward"), (h.compose(g)?, "forward after inverse")] {
            let id = Transducer::identity(t.domain());
            match equivalent_maps(&t, &id, default_delay_bound(&t, &id))? {
                MapEquivalence::Equal => {}
                other => {
                    return Err(Error::InvalidWitness(format!(
                        "{name} is not the identity ({})",
                        other.label()
                    )))
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub coe: CoeVerdict,
    pub witness_verified: bool,
    /// `Psi_h(1)` and `Psi_{h^-1}(1)`.
    pub psi_one: Option<(LocallyConstantFunction, LocallyConstantFunction)>,
    pub eventual_conjugacy: Option<bool>,
    pub strong: Option<bool>,
}

/// Cross-checks the invariant verdict against an explicit witness; a
/// verified witness contradicting a `no` verdict is an error.
pub fn consistency_check(
    pa: &Presentation,
    pb: &Presentation,
    witness: Option<&CoeWitness>,
) -> Result<ConsistencyReport> {
    let coe = coe_verdict(pa, pb);
    let Some(w) = witness else {
        return Ok(ConsistencyReport {
            coe,
            witness_verified: false,
            psi_one: None,
            eventual_conjugacy: None,
            strong: None,
        });
    };
    if !same_presentation(w.forward.domain(), pa) || !same_presentation(w.forward.codomain(), pb) {
        return Err(Error::DomainMismatch);
    }
    w.verify()?;
    if coe.verdict == Verdict::No {
        return Err(Error::ContradictionDetected(format!(
            "verified orbit equivalence but invariants say no: {}",
            coe.reason
        )));
    }
    let forward = transfer_psi(&w.forward, &w.forward_data, &LocallyConstantFunction::one(pb))?;
    let backward = transfer_psi(&w.inverse, &w.inverse_data, &LocallyConstantFunction::one(pa))?;
    let eventual = is_eventual_conjugacy(&w.forward, &w.forward_data, &w.inverse, &w.inverse_data)?;
    let strong = is_strong_coe(&w.forward, &w.forward_data)?.is_zero();
    Ok(ConsistencyReport {
        coe,
        witness_verified: true,
        psi_one: Some((forward, backward)),
        eventual_conjugacy: Some(eventual),
        strong: Some(strong),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::IntMatrix;
    use crate::moves::expand;
    use crate::sft::{PresentationKind, SftPresentation};

    fn vertex(rows: &[Vec<i64>]) -> Presentation {
        SftPresentation::validate(&IntMatrix::from_rows(rows), PresentationKind::Vertex).unwrap()
    }

    fn fib() -> Presentation {
        vertex(&[vec![1, 1], vec![1, 0]])
    }

    fn full(n: usize) -> Presentation {
        vertex(&vec![vec![1; n]; n])
    }

    #[test]
    fn invariant_examples() {
        let r = invariants(&fib());
        assert!(r.bf_group.is_trivial());
        assert_eq!(r.det_sign, -1);
        let r2 = invariants(&full(2));
        assert!(r2.bf_group.is_trivial());
        assert_eq!(r2.det_sign, -1);
        let r3 = invariants(&full(3));
        assert_eq!(r3.bf_group.to_string(), "Z/2");
        assert_eq!(r3.det_sign, -1);
        assert_eq!(r3.det, BigInt::from(-2));
    }

    #[test]
    fn spectral_bounds_bracket_known_values() {
        let (lo, hi) = invariants(&fib()).spectral_radius;
        let phi = 1.618_033_988_749_895_f64;
        assert!(decimal(&lo, 9, false).parse::<f64>().unwrap() <= phi);
        assert!(decimal(&hi, 9, true).parse::<f64>().unwrap() >= phi);
        assert!(&hi - &lo < BigRational::new(1.into(), 1_000_000.into()));
        let (lo, hi) = invariants(&full(3)).spectral_radius;
        assert_eq!((lo.clone(), hi), (BigRational::from_integer(3.into()), BigRational::from_integer(3.into())));
        assert_eq!(decimal(&lo, 2, false), "3.00");
    }

    #[test]
    fn verdict_fixtures() {
        assert!(flow_equivalent(&fib(), &full(2)).equivalent);
        assert_eq!(coe_verdict(&fib(), &full(2)).verdict, Verdict::Yes);
        assert!(!flow_equivalent(&full(2), &full(3)).equivalent);
        assert_eq!(coe_verdict(&full(2), &full(3)).verdict, Verdict::No);
        assert_eq!(coe_verdict(&fib(), &fib()).verdict, Verdict::Yes);
        let p = vertex(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]);
        let e = expand(&p, 1).unwrap();
        assert!(flow_equivalent(&p, e.expanded()).equivalent);
    }

    #[test]
    fn consistency_with_witnesses() {
        let p = fib();
        let id = Transducer::identity(&p);
        let data = OrbitData::conjugacy(&p);
        let w = CoeWitness {
            forward: id.clone(),
            forward_data: data.clone(),
            inverse: id,
            inverse_data: data,
        };
        let r = consistency_check(&p, &p, Some(&w)).unwrap();
        assert!(r.witness_verified);
        assert_eq!(r.strong, Some(true));

        let hb = p.higher_block(2).unwrap();
        let (fwd, inv) = Transducer::block_conjugacy(&hb).unwrap();
        let w = CoeWitness {
            forward: fwd,
            forward_data: OrbitData::conjugacy(&p),
            inverse: inv,
            inverse_data: OrbitData::conjugacy(hb.presentation()),
        };
        let r = consistency_check(&p, hb.presentation(), Some(&w)).unwrap();
        assert_eq!(r.coe.verdict, Verdict::Yes);
        assert_eq!(r.eventual_conjugacy, Some(true));

        let r = consistency_check(&p, &full(2), None).unwrap();
        assert!(!r.witness_verified && r.psi_one.is_none());
    }

    #[test]
    fn expansion_pair_is_only_a_left_inverse() {
        let p = fib();
        let e = expand(&p, 0).unwrap();
        let w = CoeWitness {
            forward: e.xi().clone(),
            forward_data: e.xi_data().clone(),
            inverse: e.eta().clone(),
            inverse_data: e.eta_data().clone(),
        };
        match consistency_check(&p, e.expanded(), Some(&w)) {
            Err(Error::InvalidWitness(msg)) => assert!(msg.starts_with("forward after inverse")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn broken_witness_rejected() {
        let p = fib();
        let e = expand(&p, 0).unwrap();
        let w = CoeWitness {
            forward: e.xi().clone(),
            forward_data: OrbitData::conjugacy(&p),
            inverse: e.eta().clone(),
            inverse_data: e.eta_data().clone(),
        };
        assert!(matches!(consistency_check(&p, e.expanded(), Some(&w)), Err(Error::InvalidWitness(_))));
    }
}
