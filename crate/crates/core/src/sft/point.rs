use super::{SftPresentation, Symbol};
use crate::error::{Error, Result};

/// The point `u v v v ...`, kept in canonical form: `v` primitive and `u`
/// as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicPoint {
    preperiod: Vec<Symbol>,
    period: Vec<Symbol>,
}

/// Canonical `(preperiod, period)` for the point `u v v v ...`.
pub fn canonical_form(u: &[Symbol], v: &[Symbol]) -> (Vec<Symbol>, Vec<Symbol>) {
    assert!(!v.is_empty(), "period must be nonempty");
    let n = v.len();
    let d = (1..=n)
        .find(|&d| n % d == 0 && v[d..] == v[..n - d])
        .unwrap_or(n);
    let mut period = v[..d].to_vec();
    let mut preperiod = u.to_vec();
    while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
        if a != b {
            break;
        }
        preperiod.pop();
        period.rotate_right(1);
    }
    (preperiod, period)
}

impl EventuallyPeriodicPoint {
    pub fn new(p: &SftPresentation, preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Inadmissible("empty period".into()));
        }
        let mut full = preperiod.clone();
        full.extend_from_slice(&period);
        full.extend_from_slice(&period);
        if !p.is_admissible(&full) {
            return Err(Error::Inadmissible(format!(
                "{}({}) is not a point of the shift",
                p.render(&preperiod),
                p.render(&period)
            )));
        }
        Ok(Self::from_parts(&preperiod, &period))
    }

    pub fn periodic(p: &SftPresentation, period: Vec<Symbol>) -> Result<Self> {
        Self::new(p, Vec::new(), period)
    }

    pub(crate) fn from_parts(u: &[Symbol], v: &[Symbol]) -> Self {
        let (preperiod, period) = canonical_form(u, v);
        EventuallyPeriodicPoint { preperiod, period }
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        let u = self.preperiod.len();
        if i < u {
            self.preperiod[i]
        } else {
            self.period[(i - u) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        (0..n).map(|i| self.symbol_at(i)).collect()
    }

    /// `sigma(x)`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, n: usize) -> Self {
        let u = self.preperiod.len();
        if n <= u {
            return Self::from_parts(&self.preperiod[n..], &self.period);
        }
        let r = (n - u) % self.period.len();
        let mut v = self.period.clone();
        v.rotate_left(r);
        EventuallyPeriodicPoint {
            preperiod: Vec::new(),
            period: v,
        }
    }

    /// `w x`, assuming it is admissible.
    pub(crate) fn prepend(&self, w: &[Symbol]) -> Self {
        let mut u = w.to_vec();
        u.extend_from_slice(&self.preperiod);
        Self::from_parts(&u, &self.period)
    }
}

impl SftPresentation {
    /// All canonical eventually periodic points with `|u| <= max_pre` and
    /// `|v| <= max_period`, sorted.
    pub fn eventually_periodic_points(
        &self,
        max_pre: usize,
        max_period: usize,
    ) -> Result<Vec<EventuallyPeriodicPoint>> {
        let mut out = Vec::new();
        for m in 1..=max_period {
            let table = self.word_table(m)?;
            for v in table.iter() {
                if !self.follows(v[m - 1], v[0]) || !super::words::is_primitive(v) {
                    continue;
                }
                out.push(EventuallyPeriodicPoint {
                    preperiod: Vec::new(),
                    period: v.to_vec(),
                });
                for len in 1..=max_pre {
                    for u in self.word_table(len)?.iter() {
                        if u[len - 1] != v[m - 1] && self.follows(u[len - 1], v[0]) {
                            out.push(EventuallyPeriodicPoint {
                                preperiod: u.to_vec(),
                                period: v.to_vec(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::IntMatrix;
    use crate::sft::PresentationKind;
    use proptest::prelude::*;

    fn fib() -> crate::sft::Presentation {
        SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]),
            PresentationKind::Vertex,
        )
        .unwrap()
    }

    #[test]
    fn rotation_of_periodic_point() {
        let p = fib();
        let x = EventuallyPeriodicPoint::periodic(&p, vec![0, 1]).unwrap();
        assert_eq!(x.shift().period(), &[1, 0]);
        assert!(x.shift().is_periodic());
    }

    #[test]
    fn preperiod_absorbed() {
        let p = fib();
        let x = EventuallyPeriodicPoint::new(&p, vec![0], vec![0, 1]).unwrap();
        assert_eq!((x.preperiod(), x.period()), (&[0][..], &[0, 1][..]));
        let y = EventuallyPeriodicPoint::new(&p, vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!((y.preperiod(), y.period()), (&[][..], &[0, 1][..]));
        let s = x.shift();
        assert_eq!((s.preperiod(), s.period()), (&[][..], &[0, 1][..]));
        // symbol streams agree with the raw representation 1 1 2 1 2 ...
        let raw = [0, 0, 1, 0, 1, 0, 1];
        assert_eq!(x.prefix(7), raw);
        assert_eq!(s.prefix(6), raw[1..]);
    }

    #[test]
    fn fixed_point_of_full_shift() {
        let p = SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]),
            PresentationKind::Vertex,
        )
        .unwrap();
        let x = EventuallyPeriodicPoint::periodic(&p, vec![0]).unwrap();
        assert_eq!(x.shift(), x);
    }

    #[test]
    fn inadmissible_point_rejected() {
        assert!(EventuallyPeriodicPoint::new(&fib(), vec![0], vec![1]).is_err());
    }

    #[test]
    fn enumeration_is_distinct_and_closed_under_shift() {
        let p = fib();
        let pts = p.eventually_periodic_points(3, 4).unwrap();
        let mut dedup = pts.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), pts.len());
        // every periodic point with period length <= 4 is the image of some point
        // in the set (surjectivity at fixed period length)
        for x in pts.iter().filter(|x| x.is_periodic()) {
            assert!(pts.iter().any(|y| &y.shift() == x));
        }
        for x in &pts {
            let (u, v) = canonical_form(x.preperiod(), x.period());
            assert_eq!((u.as_slice(), v.as_slice()), (x.preperiod(), x.period()));
        }
    }

    proptest! {
        #[test]
        fn canonical_form_idempotent_and_stream_preserving(
            u in proptest::collection::vec(0u32..3, 0..5),
            v in proptest::collection::vec(0u32..3, 1..6),
        ) {
            let (cu, cv) = canonical_form(&u, &v);
            let (cu2, cv2) = canonical_form(&cu, &cv);
            prop_assert_eq!(&cu, &cu2);
            prop_assert_eq!(&cv, &cv2);
            let a = EventuallyPeriodicPoint { preperiod: u.clone(), period: v.clone() };
            let b = EventuallyPeriodicPoint { preperiod: cu, period: cv };
            prop_assert_eq!(a.prefix(30), b.prefix(30));
        }
    }
}
