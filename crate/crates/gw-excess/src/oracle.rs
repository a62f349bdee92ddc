//! Independent verification of the excess-bundle count by brute force:
//! enumerate the isolated zeros of the n quadrics over small finite fields up
//! to a degree bound, compute the local index of each zero from its Jacobian
//! in the signed affine chart, transfer along the residue extension, and
//! compare the sum against 2^(n-1) hyperbolic forms minus the Euler number of
//! the excess bundle.
//!
//! Enumeration is chart-by-chart scanning of projective space with table
//! arithmetic and early exit; no elimination theory. Simplicity and
//! auditability outrank speed here — the point of this module is to be an
//! oracle the rest of the crate cannot influence.

use crate::excess::{quadrics_to_m, ExcessReport};
use crate::field::{Elem, Field, FieldKind};
use crate::gw::{Equality, GwClass};
use crate::linalg::DenseMatrix;
use crate::poly::{Homogeneity, Poly};
use crate::{Error, Result};

/// Largest residue-field order for which enumeration tables are built.
const TABLE_CAP: u64 = 2048;

/// A closed point of exact degree d: the lexicographically least Frobenius
/// conjugate, with homogeneous coordinates over F_{p^d} normalized so the
/// first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    pub degree: usize,
    pub field: Field,
    pub coords: Vec<Elem>,
}

impl std::fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] (degree {})", self.degree)
    }
}

/// One zero's contribution to the count.
#[derive(Clone, Debug)]
pub struct PointContribution {
    pub point: ClosedPoint,
    /// Jacobian determinant in the residue field, signed chart convention.
    pub jacobian: Elem,
    /// Transfer of <jacobian> down to the base field.
    pub index_over_base: GwClass,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleStatus {
    Verified,
    Incomplete,
    Failed,
}

#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub status: OracleStatus,
    pub contributions: Vec<PointContribution>,
    /// Sum of residue degrees of the found points.
    pub found_rank: i64,
    /// 2^n - C(n,2) - n - 1.
    pub expected_rank: i64,
    pub lhs: GwClass,
    pub rhs: GwClass,
    pub points_scanned: u64,
    pub budget_exceeded: bool,
    /// Degrees 1..=this were scanned to completion.
    pub complete_through_degree: usize,
    pub failure: Option<String>,
}

/// Raw enumeration output.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub points: Vec<ClosedPoint>,
    pub scanned: u64,
    pub budget_exceeded: bool,
    pub complete_through_degree: usize,
    /// Set when degree scans were skipped because the remaining rank cannot
    /// be assembled from the remaining degrees.
    pub pruned: bool,
}

// ---- table arithmetic over a small finite field ----

struct SmallField {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    /// x -> x^p, the arithmetic Frobenius over the prime field.
    frob: Vec<u16>,
}

impl SmallField {
    fn build(field: &Field) -> Result<SmallField> {
        let q64 = field.order().ok_or_else(|| Error::Unsupported("finite field required".into()))?;
        if q64 > TABLE_CAP {
            return Err(Error::Unsupported(format!(
                "residue field of order {q64} exceeds the enumeration cap {TABLE_CAP}"
            )));
        }
        let q = q64 as usize;
        let elems = field.elements()?;
        let p = field.characteristic();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for i in 0..q {
            for j in 0..=i {
                let s = elems[i].add(&elems[j])?.index().unwrap() as u16;
                let m = elems[i].mul(&elems[j])?.index().unwrap() as u16;
                add[i * q + j] = s;
                add[j * q + i] = s;
                mul[i * q + j] = m;
                mul[j * q + i] = m;
            }
        }
        let frob = elems
            .iter()
            .map(|e| e.pow(p as i64).map(|x| x.index().unwrap() as u16))
            .collect::<Result<_>>()?;
        Ok(SmallField { q, add, mul, frob })
    }

    #[inline(always)]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }
}

/// A quadric compiled for one chart (x_l = 1, higher coordinates 0):
/// constant + linear + quadratic terms in the free coordinates 0..l.
/// Terms are split by their dependence on the innermost coordinate t = l-1,
/// so a scan can hoist everything else out of the inner loop:
/// value = A t^2 + B(prefix) t + C(prefix).
struct ChartQuadric {
    constant: u16,
    linear: Vec<(u16, usize)>,
    quadratic: Vec<(u16, usize, usize)>,
    /// coefficient of t^2
    t_square: u16,
    /// coefficient of t itself (from the x_l = 1 substitution)
    t_const: u16,
    /// terms c * x_u * t with u < t
    t_linear: Vec<(u16, usize)>,
}

fn compile_chart(quadrics: &[Poly], chart: usize, sf: &SmallField) -> Result<Vec<ChartQuadric>> {
    let t = chart - 1; // innermost free coordinate
    let mut out = Vec::with_capacity(quadrics.len());
    for q in quadrics {
        let mut cq = ChartQuadric {
            constant: 0,
            linear: Vec::new(),
            quadratic: Vec::new(),
            t_square: 0,
            t_const: 0,
            t_linear: Vec::new(),
        };
        for (mono, c) in q.terms() {
            let exps = mono.exps();
            if (chart + 1..exps.len()).any(|v| exps[v] > 0) {
                continue; // involves a zero coordinate
            }
            // lift the base-field coefficient: prime residues index constants
            let ci = c
                .residue()
                .ok_or_else(|| Error::Unsupported("quadrics must have prime-field coefficients".into()))?
                as u16;
            let vars: Vec<usize> = (0..=chart)
                .flat_map(|v| std::iter::repeat(v).take(exps[v] as usize))
                .collect();
            let [u, v] = vars.as_slice() else {
                return Err(Error::Degree("oracle inputs must be quadrics".into()));
            };
            // substitute x_chart = 1, then split off dependence on t
            let (u, v) = (*u, *v);
            match (u == chart, v == chart) {
                (true, true) => cq.constant = sf.add(cq.constant, ci),
                (false, true) | (true, false) => {
                    let w = if u == chart { v } else { u };
                    if w == t {
                        cq.t_const = sf.add(cq.t_const, ci);
                    } else {
                        cq.linear.push((ci, w));
                    }
                }
                (false, false) => {
                    if u == t && v == t {
                        cq.t_square = sf.add(cq.t_square, ci);
                    } else if v == t {
                        cq.t_linear.push((ci, u));
                    } else if u == t {
                        cq.t_linear.push((ci, v));
                    } else {
                        cq.quadratic.push((ci, u, v));
                    }
                }
            }
        }
        out.push(cq);
    }
    Ok(out)
}

/// The t-free part C(prefix) and the t-coefficient B(prefix).
#[inline]
fn prefix_coeffs(cq: &ChartQuadric, point: &[u16], sf: &SmallField) -> (u16, u16) {
    let mut c_acc = cq.constant;
    for &(c, u) in &cq.linear {
        c_acc = sf.add(c_acc, sf.mul(c, point[u]));
    }
    for &(c, u, v) in &cq.quadratic {
        c_acc = sf.add(c_acc, sf.mul(c, sf.mul(point[u], point[v])));
    }
    let mut b_acc = cq.t_const;
    for &(c, u) in &cq.t_linear {
        b_acc = sf.add(b_acc, sf.mul(c, point[u]));
    }
    (c_acc, b_acc)
}

/// Whether `remaining` can be written as a sum of integers from the multiset
/// {degrees d..=max_degree, repeated}.
pub fn rank_reachable(remaining: i64, from_degree: usize, max_degree: usize) -> bool {
    if remaining == 0 {
        return true;
    }
    if remaining < 0 || from_degree > max_degree {
        return false;
    }
    let target = remaining as usize;
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for d in from_degree..=max_degree {
        for v in d..=target {
            if reach[v - d] {
                reach[v] = true;
            }
        }
    }
    reach[target]
}

/// Enumerate the closed points of exact degree <= max_degree lying on all
/// quadrics and off the plane, as canonical Frobenius-orbit representatives,
/// in deterministic order.
///
/// `prune_target`: when set, degree scans stop early once the remaining rank
/// (target minus found) cannot be assembled from the remaining degrees.
pub fn enumerate_gamma(
    base: &Field,
    quadrics: &[Poly],
    max_degree: usize,
    budget: u64,
    prune_target: Option<i64>,
) -> Result<Enumeration> {
    if base.kind() != FieldKind::PrimeFinite {
        return Err(Error::Unsupported(
            "point enumeration requires a prime base field".into(),
        ));
    }
    let p = base.characteristic();
    let n = quadrics.len();
    let nv = n + 1;
    for q in quadrics {
        if q.nvars() != nv {
            return Err(Error::Dimension(format!("quadrics must have {nv} variables")));
        }
        match q.homogeneity() {
            Homogeneity::Degree(2) | Homogeneity::Zero => {}
            _ => return Err(Error::Degree("oracle inputs must be quadrics".into())),
        }
    }

    let mut points: Vec<(usize, Vec<u16>, Field)> = Vec::new();
    let mut scanned: u64 = 0;
    let mut budget_exceeded = false;
    let mut pruned = false;
    let mut complete_through = 0usize;

    'degrees: for d in 1..=max_degree {
        if let Some(target) = prune_target {
            let found: i64 = points.iter().map(|(deg, _, _)| *deg as i64).sum();
            if !rank_reachable(target - found, d, max_degree) {
                pruned = true;
                break 'degrees;
            }
        }
        let field_d = if d == 1 { base.clone() } else { Field::build_extension(p, d, 0)? };
        let sf = SmallField::build(&field_d)?;
        let q = sf.q;
        // lift quadrics: prime-field coefficients read directly as indices
        let mut raw_hits: Vec<(usize, Vec<u16>)> = Vec::new();
        for chart in 3..nv {
            let compiled = compile_chart(quadrics, chart, &sf)?;
            // the innermost coordinate t = chart-1 is hoisted: per prefix,
            // each quadric is (A t + B) t + C with A fixed and B, C cheap
            let prefix_len = chart - 1;
            let mut prefix = vec![0u16; prefix_len];
            let mut coeffs: Vec<(u16, u16)> = vec![(0, 0); compiled.len()];
            'prefixes: loop {
                scanned += q as u64;
                if scanned > budget {
                    budget_exceeded = true;
                    break 'degrees;
                }
                for (slot, cq) in coeffs.iter_mut().zip(&compiled) {
                    *slot = prefix_coeffs(cq, &prefix, &sf);
                }
                for t in 0..q as u16 {
                    let mut hit = true;
                    for (cq, &(c, b)) in compiled.iter().zip(&coeffs) {
                        let val = sf.add(sf.mul(sf.add(sf.mul(cq.t_square, t), b), t), c);
                        if val != 0 {
                            hit = false;
                            break;
                        }
                    }
                    if hit {
                        let mut full = prefix.clone();
                        full.push(t);
                        full.push(1);
                        full.resize(nv, 0);
                        raw_hits.push((chart, full));
                    }
                }
                // advance the prefix odometer, last coordinate fastest
                let mut pos = prefix_len;
                loop {
                    if pos == 0 {
                        break 'prefixes;
                    }
                    pos -= 1;
                    prefix[pos] += 1;
                    if (prefix[pos] as usize) < q {
                        break;
                    }
                    prefix[pos] = 0;
                }
            }
        }
        // keep exact-degree canonical orbit representatives
        for (_, tuple) in raw_hits {
            let normalized = normalize_first(&tuple, &sf);
            let mut orbit = vec![normalized.clone()];
            let mut cur = normalized.clone();
            loop {
                cur = cur.iter().map(|&e| sf.frob[e as usize]).collect();
                if cur == normalized {
                    break;
                }
                orbit.push(cur.clone());
            }
            if orbit.len() != d {
                continue; // defined over a proper subfield (or not exact)
            }
            if orbit.iter().min().unwrap() != &normalized {
                continue; // a conjugate is the canonical representative
            }
            points.push((d, normalized, field_d.clone()));
        }
        complete_through = d;
    }

    points.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let points = points
        .into_iter()
        .map(|(d, tuple, field_d)| {
            let coords = tuple
                .iter()
                .map(|&i| field_d.from_index(i as u64))
                .collect::<Result<Vec<_>>>()?;
            Ok(ClosedPoint { degree: d, field: field_d, coords })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Enumeration {
        points,
        scanned,
        budget_exceeded,
        complete_through_degree: complete_through,
        pruned,
    })
}

/// Rescale so the first nonzero coordinate is 1.
fn normalize_first(tuple: &[u16], sf: &SmallField) -> Vec<u16> {
    let lead = tuple.iter().position(|&c| c != 0).expect("projective point");
    if tuple[lead] == 1 {
        return tuple.to_vec();
    }
    // inverse by scanning (fields are tiny)
    let inv = (0..sf.q as u16).find(|&x| sf.mul(tuple[lead], x) == 1).expect("unit");
    tuple.iter().map(|&c| sf.mul(c, inv)).collect()
}

/// Jacobian determinant of the section at a zero, in the residue field,
/// using the signed chart at the given index (least valid index when None):
/// with coordinates scaled so x_l(p) = 1, this is
/// (-1)^l det(df_i/dx_j (p))_{j != l}.
pub fn local_jacobian(point: &ClosedPoint, quadrics: &[Poly], chart: Option<usize>) -> Result<Elem> {
    let nv = quadrics.len() + 1;
    let l = match chart {
        Some(l) => {
            if point.coords[l].is_zero() {
                return Err(Error::InvalidInput(format!("coordinate {l} vanishes at the point")));
            }
            l
        }
        None => point
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("zero coordinate vector".into()))?,
    };
    // rescale so x_l = 1
    let scale = point.coords[l].inv()?;
    let coords: Vec<Elem> = point.coords.iter().map(|c| c.mul(&scale)).collect::<Result<_>>()?;
    let field_d = point.field.clone();
    let mut entries = Vec::with_capacity(quadrics.len() * quadrics.len());
    for qi in quadrics {
        for j in (0..nv).filter(|&j| j != l) {
            let val = qi.partial_derivative(j).eval(&coords)?;
            entries.push(val);
        }
    }
    let jac = DenseMatrix::new(field_d.clone(), quadrics.len(), quadrics.len(), entries)?.determinant()?;
    Ok(if l % 2 == 1 { jac.neg() } else { jac })
}

/// The local index: <Jac(p)> in GW of the residue field, and its transfer to
/// the prime base field. Errors when the zero is not simple.
pub fn local_index(point: &ClosedPoint, quadrics: &[Poly]) -> Result<(Elem, GwClass)> {
    let jac = local_jacobian(point, quadrics, None)?;
    if jac.is_zero() {
        return Err(Error::Inadmissible(format!(
            "non-simple zero at {point}: the scheme is not etale there"
        )));
    }
    let class = GwClass::from_diagonal(point.field.clone(), &[jac.clone()])?;
    let transferred = if point.degree == 1 { class } else { class.transfer()? };
    Ok((jac, transferred))
}

/// Compare the point count against the excess-bundle prediction.
///
/// The quadrics must restrict to the report's matrix. Degrees 1..=max_degree
/// are scanned within the evaluation budget; every found point is re-verified
/// against the quadrics, its index is computed in the paper's chart and
/// cross-checked in every other valid chart, and the verdict compares
/// (rank, disc) of the transferred sum against the predicted class.
pub fn verify_theorem(
    base: &Field,
    quadrics: &[Poly],
    report: &ExcessReport,
    max_degree: usize,
    budget: u64,
) -> Result<OracleVerdict> {
    let n = report.input.n();
    let recovered = quadrics_to_m(base, n, quadrics)?;
    if &recovered != report.input.matrix() {
        return Err(Error::InvalidInput(
            "quadrics do not restrict to the report's matrix".into(),
        ));
    }
    let expected_rank = report.theorem_rhs.rank();
    let rhs = report.theorem_rhs.clone();
    let enumeration = enumerate_gamma(base, quadrics, max_degree, budget, None)?;

    let mut contributions = Vec::new();
    let mut lhs = GwClass::zero(base.clone())?;
    let mut found_rank = 0i64;
    let mut failure: Option<String> = None;

    for point in &enumeration.points {
        // re-verify: the point satisfies every quadric and lies off the plane
        for (i, q) in quadrics.iter().enumerate() {
            if !q.eval(&point.coords)?.is_zero() {
                return Err(Error::Internal(format!("enumerated point {point} misses quadric {i}")));
            }
        }
        if point.coords[3..].iter().all(|c| c.is_zero()) {
            return Err(Error::Internal(format!("enumerated point {point} lies on the plane")));
        }
        match local_index(point, quadrics) {
            Ok((jac, idx)) => {
                // chart independence of the transferred class
                for l in 0..point.coords.len() {
                    if l == 3 || point.coords[l].is_zero() {
                        continue;
                    }
                    let alt = local_jacobian(point, quadrics, Some(l))?;
                    let alt_class = GwClass::from_diagonal(point.field.clone(), &[alt])?;
                    let alt_tr = if point.degree == 1 { alt_class } else { alt_class.transfer()? };
                    if idx.is_equal(&alt_tr)? != Equality::Equal {
                        return Err(Error::Internal(format!(
                            "local index at {point} depends on the chart"
                        )));
                    }
                }
                found_rank += point.degree as i64;
                lhs = lhs.add(&idx)?;
                contributions.push(PointContribution {
                    point: point.clone(),
                    jacobian: jac,
                    index_over_base: idx,
                });
            }
            Err(Error::Inadmissible(msg)) => {
                failure = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let status = if failure.is_some() || found_rank > expected_rank {
        if failure.is_none() {
            failure = Some(format!(
                "found rank {found_rank} exceeds the expected {expected_rank}: the input is not general"
            ));
        }
        OracleStatus::Failed
    } else if found_rank < expected_rank {
        OracleStatus::Incomplete
    } else if lhs.is_equal(&rhs)? == Equality::Equal {
        OracleStatus::Verified
    } else {
        failure = Some(format!(
            "complete enumeration disagrees with the predicted class: sum {lhs} vs {rhs}"
        ));
        OracleStatus::Failed
    };

    Ok(OracleVerdict {
        status,
        contributions,
        found_rank,
        expected_rank,
        lhs,
        rhs,
        points_scanned: enumeration.scanned,
        budget_exceeded: enumeration.budget_exceeded,
        complete_through_degree: enumeration.complete_through_degree,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excess::{random_admissible_input, run_excess};

    #[test]
    fn rank_reachability() {
        assert!(rank_reachable(0, 2, 3));
        assert!(rank_reachable(16, 1, 1));
        assert!(rank_reachable(5, 2, 3)); // 2 + 3
        assert!(!rank_reachable(1, 2, 3));
        assert!(!rank_reachable(7, 4, 5)); // 4,5,8,9,10.. but not 7
        assert!(!rank_reachable(3, 4, 3));
    }

    #[test]
    fn enumeration_counts_plane_complement() {
        // with zero quadrics every off-plane point of P^5(F_3) is a hit:
        // charts 3,4,5 hold 27 + 81 + 243 degree-agnostic tuples; degree-1
        // representatives are exactly those points, 351 of them
        let f3 = Field::prime(3).unwrap();
        let zero = vec![Poly::zero(f3.clone(), 6); 5];
        let e = enumerate_gamma(&f3, &zero, 1, 10_000, None).unwrap();
        assert_eq!(e.points.len(), 351);
        assert!(!e.budget_exceeded);
        assert_eq!(e.scanned, 351);
    }

    #[test]
    fn budget_is_respected() {
        let f3 = Field::prime(3).unwrap();
        let zero = vec![Poly::zero(f3.clone(), 6); 5];
        let e = enumerate_gamma(&f3, &zero, 1, 100, None).unwrap();
        assert!(e.budget_exceeded);
        assert_eq!(e.complete_through_degree, 0);
    }

    #[test]
    fn degree_two_points_have_full_orbits() {
        // x_0^2 + x_3^2 (wrapped as a quadric vanishing on the plane is not
        // possible for this shape; instead scan a small admissible instance
        // and check orbit arithmetic on whatever appears)
        let f3 = Field::prime(3).unwrap();
        let (input, _) = random_admissible_input(&f3, 5, 1, 5000).unwrap();
        let quadrics = input.lift_quadrics().unwrap();
        let e = enumerate_gamma(&f3, &quadrics, 2, 200_000, None).unwrap();
        for pt in &e.points {
            if pt.degree == 2 {
                // coordinates not all in F_3: some coordinate moves under frobenius
                let moved = pt
                    .coords
                    .iter()
                    .any(|c| &c.frobenius().unwrap() != c);
                assert!(moved, "degree-2 point fixed by frobenius: {pt}");
            }
            // all points satisfy the quadrics
            for q in &quadrics {
                assert!(q.eval(&pt.coords).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn verify_rejects_mismatched_quadrics() {
        let f31 = Field::prime(31).unwrap();
        let report = run_excess(&crate::excess::samples::f31_square_disc()).unwrap();
        let other = crate::excess::samples::f31_nonsquare_disc().lift_quadrics().unwrap();
        assert!(verify_theorem(&f31, &other, &report, 1, 10_000_000).is_err());
    }

    #[test]
    fn truncated_scan_is_incomplete() {
        let f31 = Field::prime(31).unwrap();
        let input = crate::excess::samples::f31_square_disc();
        let report = run_excess(&input).unwrap();
        let quadrics = input.lift_quadrics().unwrap();
        // degree-1 scan over F_31: 31^3 + 31^4 + 31^5 ~ 3e7 points is too
        // many for a unit test budget; cap the budget and expect a truncated,
        // non-verified verdict
        let verdict = verify_theorem(&f31, &quadrics, &report, 1, 200_000).unwrap();
        assert!(verdict.budget_exceeded);
        assert_ne!(verdict.status, OracleStatus::Verified);
    }
}
