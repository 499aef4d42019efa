//! The Brin-Thompson group 2V: bijections between dyadic rectangle
//! partitions of the Cantor square, acting coordinatewise by prefix
//! substitution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{all_words, check_binary, two_pow, EventuallyZero, ThompsonError};

fn prefix_comparable(a: &str, b: &str) -> bool {
    a.starts_with(b) || b.starts_with(a)
}

/// `prefix` addresses a cylinder that contains the point `head 000…`.
pub(crate) fn covers_point(prefix: &str, head: &str) -> bool {
    if head.len() >= prefix.len() {
        head.starts_with(prefix)
    } else {
        prefix.starts_with(head) && prefix[head.len()..].bytes().all(|b| b == b'0')
    }
}

/// A partition of the Cantor square into dyadic rectangles, each addressed
/// by a pair of binary words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectPartition {
    rects: Vec<(String, String)>,
}

impl RectPartition {
    pub fn new<I, S, T>(rects: I) -> Result<Self, ThompsonError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut rects: Vec<(String, String)> = rects
            .into_iter()
            .map(|(p, q)| (p.into(), q.into()))
            .collect();
        rects.sort();
        for (p, q) in &rects {
            check_binary(p)?;
            check_binary(q)?;
        }
        for i in 0..rects.len() {
            for j in i + 1..rects.len() {
                let (p1, q1) = &rects[i];
                let (p2, q2) = &rects[j];
                if prefix_comparable(p1, p2) && prefix_comparable(q1, q2) {
                    return Err(ThompsonError::RectOverlap(
                        p1.clone(),
                        q1.clone(),
                        p2.clone(),
                        q2.clone(),
                    ));
                }
            }
        }
        let sum: BigRational = rects
            .iter()
            .map(|(p, q)| BigRational::new(BigInt::one(), two_pow(p.len() + q.len())))
            .sum();
        if sum != BigRational::one() {
            return Err(ThompsonError::IncompleteCode);
        }
        Ok(RectPartition { rects })
    }

    pub fn rects(&self) -> &[(String, String)] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Maximum coordinate word length over all rectangles.
    pub fn depth(&self) -> usize {
        self.rects
            .iter()
            .map(|(p, q)| p.len().max(q.len()))
            .max()
            .unwrap_or(0)
    }
}

/// The two-coordinate local rule of a 2V element at depth `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TvLocalRule {
    n: usize,
    table: BTreeMap<(String, String), (String, String)>,
}

impl TvLocalRule {
    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn image(&self, u: &str, v: &str) -> Option<(&str, &str)> {
        self.table
            .get(&(u.to_string(), v.to_string()))
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn table(&self) -> &BTreeMap<(String, String), (String, String)> {
        &self.table
    }
}

/// An element of the Brin-Thompson group 2V: a bijection between two
/// rectangle partitions of equal cardinality, given pair by pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVElement {
    domain: Vec<(String, String)>,
    range: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct TwoVElementRepr {
    domain: Vec<(String, String)>,
    range: Vec<(String, String)>,
}

impl Serialize for TwoVElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        TwoVElementRepr {
            domain: self.domain.clone(),
            range: self.range.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TwoVElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = TwoVElementRepr::deserialize(de)?;
        let pairs = repr.domain.into_iter().zip(repr.range).collect::<Vec<_>>();
        TwoVElement::new(pairs).map_err(serde::de::Error::custom)
    }
}

impl TwoVElement {
    pub fn new<I>(pairs: I) -> Result<Self, ThompsonError>
    where
        I: IntoIterator<Item = ((String, String), (String, String))>,
    {
        let mut pairs: Vec<((String, String), (String, String))> = pairs.into_iter().collect();
        pairs.sort();
        let domain: Vec<(String, String)> = pairs.iter().map(|(d, _)| d.clone()).collect();
        let range: Vec<(String, String)> = pairs.iter().map(|(_, r)| r.clone()).collect();
        let dp = RectPartition::new(domain.clone())?;
        let rp = RectPartition::new(range.clone())?;
        if dp.len() != rp.len() {
            return Err(ThompsonError::SizeMismatch {
                domain: dp.len(),
                range: rp.len(),
            });
        }
        Ok(TwoVElement { domain, range })
    }

    pub fn identity() -> Self {
        TwoVElement {
            domain: vec![(String::new(), String::new())],
            range: vec![(String::new(), String::new())],
        }
    }

    /// The baker's map: shifts the first digit of the first coordinate onto
    /// the second coordinate, f((ax, y)) = (x, ay).
    pub fn baker() -> Self {
        TwoVElement::new([
            (("0".into(), "".into()), ("".into(), "0".into())),
            (("1".into(), "".into()), ("".into(), "1".into())),
        ])
        .unwrap()
    }

    pub fn pairs(
        &self,
    ) -> impl Iterator<Item = (&(String, String), &(String, String))> {
        self.domain.iter().zip(self.range.iter())
    }

    pub fn domain(&self) -> RectPartition {
        RectPartition::new(self.domain.clone()).expect("domain stays a valid partition")
    }

    pub fn range(&self) -> RectPartition {
        RectPartition::new(self.range.clone()).expect("range stays a valid partition")
    }

    /// Maximum coordinate word length over the domain rectangles.
    pub fn depth(&self) -> usize {
        self.domain
            .iter()
            .map(|(p, q)| p.len().max(q.len()))
            .max()
            .unwrap_or(0)
    }

    /// Group composition, `other` first.
    pub fn compose(&self, other: &TwoVElement) -> TwoVElement {
        // cells of the common refinement of other.range and self.domain
        let mut cells: Vec<(String, String)> = Vec::new();
        for (hp, hq) in &other.range {
            for (gp, gq) in &self.domain {
                if prefix_comparable(hp, gp) && prefix_comparable(hq, gq) {
                    let cp = if hp.len() >= gp.len() { hp } else { gp };
                    let cq = if hq.len() >= gq.len() { hq } else { gq };
                    cells.push((cp.clone(), cq.clone()));
                }
            }
        }
        cells.sort();
        cells.dedup();

        let mut pairs = Vec::with_capacity(cells.len());
        for (cp, cq) in &cells {
            let (hd, hr) = other
                .pairs()
                .find(|(_, (rp, rq))| cp.starts_with(rp.as_str()) && cq.starts_with(rq.as_str()))
                .expect("cells refine the range partition");
            let s = &cp[hr.0.len()..];
            let t = &cq[hr.1.len()..];
            let src = (format!("{}{s}", hd.0), format!("{}{t}", hd.1));
            let (gd, gr) = self
                .pairs()
                .find(|((dp, dq), _)| cp.starts_with(dp.as_str()) && cq.starts_with(dq.as_str()))
                .expect("cells refine the domain partition");
            let a = &cp[gd.0.len()..];
            let b = &cq[gd.1.len()..];
            let dst = (format!("{}{a}", gr.0), format!("{}{b}", gr.1));
            pairs.push((src, dst));
        }
        TwoVElement::new(pairs).expect("pullback of a refinement is a partition")
    }

    pub fn inverse(&self) -> TwoVElement {
        let pairs: Vec<_> = self
            .pairs()
            .map(|(d, r)| (r.clone(), d.clone()))
            .collect();
        TwoVElement::new(pairs).expect("inverse swaps two valid partitions")
    }

    /// Expands the element to the uniform grid of coordinate depth `m`; the
    /// resulting map is keyed by all pairs of length-`m` words.
    pub fn grid_map(&self, m: usize) -> BTreeMap<(String, String), (String, String)> {
        assert!(m >= self.depth(), "grid depth below element depth");
        let mut map = BTreeMap::new();
        for ((p, q), (rp, rq)) in self.pairs() {
            for s in all_words(m - p.len()) {
                for t in all_words(m - q.len()) {
                    map.insert(
                        (format!("{p}{s}"), format!("{q}{t}")),
                        (format!("{rp}{s}"), format!("{rq}{t}")),
                    );
                }
            }
        }
        map
    }

    /// Equality as group elements, decided on the uniform grid of the
    /// maximal depth present in either element.
    pub fn equivalent(&self, other: &TwoVElement) -> bool {
        let m = self.depth().max(other.depth());
        self.grid_map(m) == other.grid_map(m)
    }

    pub fn is_identity(&self) -> bool {
        self.equivalent(&TwoVElement::identity())
    }

    /// Local rule at coordinate depth `n`: functions F1, F2 with
    /// f((ux, vy)) = (F1(u,v)x, F2(u,v)y) for all |u| = |v| = n.
    pub fn local_rule(&self, n: usize) -> Result<TvLocalRule, ThompsonError> {
        if n < self.depth() {
            return Err(ThompsonError::DepthTooSmall {
                required: self.depth(),
                given: n,
            });
        }
        let mut table = BTreeMap::new();
        for u in all_words(n) {
            for v in all_words(n) {
                let ((p, q), (rp, rq)) = self
                    .pairs()
                    .find(|((p, q), _)| u.starts_with(p.as_str()) && v.starts_with(q.as_str()))
                    .expect("partition covers every grid cell at depth >= element depth");
                let f1 = format!("{rp}{}", &u[p.len()..]);
                let f2 = format!("{rq}{}", &v[q.len()..]);
                table.insert((u.clone(), v.clone()), (f1, f2));
            }
        }
        Ok(TvLocalRule { n, table })
    }

    /// Applies the element to a pair of finitely-supported points.
    pub fn apply(
        &self,
        x: &EventuallyZero,
        y: &EventuallyZero,
    ) -> (EventuallyZero, EventuallyZero) {
        let ((p, q), (rp, rq)) = self
            .pairs()
            .find(|((p, q), _)| covers_point(p, x.head()) && covers_point(q, y.head()))
            .expect("partition covers every point");
        let tail_x = if x.head().len() > p.len() {
            &x.head()[p.len()..]
        } else {
            ""
        };
        let tail_y = if y.head().len() > q.len() {
            &y.head()[q.len()..]
        } else {
            ""
        };
        (
            EventuallyZero::new(format!("{rp}{tail_x}")).expect("binary image"),
            EventuallyZero::new(format!("{rq}{tail_y}")).expect("binary image"),
        )
    }
}
