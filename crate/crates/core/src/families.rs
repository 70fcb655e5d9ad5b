//! Special graph families, their closed-form Shapley values and influence,
//! and Erdős–Rényi random graphs.
//!
//! Indexing follows the usual table conventions: the wheel `W_n` and the
//! star `S_{n-1}` both have `n` vertices in total, and `K_{m,n}` has `m + n`.
//! Canonical vertex order: wheel and star put the center last, the
//! bipartite graph lists the `m` side first, and the path runs from one
//! endpoint to the other.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::NeighborComplex;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FamilySpec {
    Complete { n: usize },
    Cycle { n: usize },
    Wheel { n: usize },
    Star { n: usize },
    Path { n: usize },
    CompleteBipartite { m: usize, n: usize },
    ErdosRenyi { n: usize, p: f64, seed: u64 },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidFamily(format!("{what} ({self})")));
        match *self {
            FamilySpec::Complete { n } | FamilySpec::Path { n } if n < 1 => bad("needs n >= 1"),
            FamilySpec::Cycle { n } if n < 3 => bad("cycle needs n >= 3"),
            FamilySpec::Wheel { n } if n < 4 => bad("wheel needs n >= 4"),
            FamilySpec::Star { n } if n < 2 => bad("star needs n >= 2"),
            FamilySpec::CompleteBipartite { m, n } if m < 1 || n < 1 => bad("bipartite needs m, n >= 1"),
            FamilySpec::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => bad("p must lie in [0, 1]"),
            _ => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            FamilySpec::Complete { n }
            | FamilySpec::Cycle { n }
            | FamilySpec::Wheel { n }
            | FamilySpec::Star { n }
            | FamilySpec::Path { n }
            | FamilySpec::ErdosRenyi { n, .. } => n,
            FamilySpec::CompleteBipartite { m, n } => m + n,
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, FamilySpec::ErdosRenyi { .. })
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            FamilySpec::Complete { n } => write!(f, "K_{n}"),
            FamilySpec::Cycle { n } => write!(f, "C_{n}"),
            FamilySpec::Wheel { n } => write!(f, "W_{n}"),
            FamilySpec::Star { n } => write!(f, "S_{}", n.saturating_sub(1)),
            FamilySpec::Path { n } => write!(f, "P_{n}"),
            FamilySpec::CompleteBipartite { m, n } => write!(f, "K_{{{m},{n}}}"),
            FamilySpec::ErdosRenyi { n, p, seed } => write!(f, "G({n}, {p}; seed {seed})"),
        }
    }
}

/// Builds the graph in canonical vertex order.
pub fn make_family(spec: &FamilySpec) -> Result<NeighborComplex> {
    spec.validate()?;
    let mut edges = Vec::new();
    let total = spec.vertex_count();
    match *spec {
        FamilySpec::Complete { n } => edges.extend((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))),
        FamilySpec::Cycle { n } => edges.extend((0..n).map(|i| (i, (i + 1) % n))),
        FamilySpec::Wheel { n } => {
            let rim = n - 1;
            edges.extend((0..rim).map(|i| (i, (i + 1) % rim)));
            edges.extend((0..rim).map(|i| (i, rim)));
        }
        FamilySpec::Star { n } => edges.extend((0..n - 1).map(|i| (i, n - 1))),
        FamilySpec::Path { n } => edges.extend((1..n).map(|i| (i - 1, i))),
        FamilySpec::CompleteBipartite { m, n } => edges.extend((0..m).flat_map(|i| (m..m + n).map(move |j| (i, j)))),
        FamilySpec::ErdosRenyi { n, p, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    Ok(NeighborComplex::from_edges(total, edges)?.with_source(spec.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Every vertex (vertex-transitive families).
    All,
    Periphery,
    Center,
    Ends,
    Middle,
    MSide,
    NSide,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoleValue {
    pub role: Role,
    pub multiplicity: usize,
    pub shapley: BigRational,
    pub influence: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormResult {
    pub spec: FamilySpec,
    pub roles: Vec<RoleValue>,
    pub entropy: f64,
}

impl ClosedFormResult {
    /// Closed-form Shapley value of each vertex in canonical order.
    pub fn vertex_shapley(&self) -> Vec<BigRational> {
        self.per_vertex(|r| r.shapley.clone())
    }

    pub fn vertex_influence(&self) -> Vec<BigRational> {
        self.per_vertex(|r| r.influence.clone())
    }

    fn per_vertex(&self, pick: impl Fn(&RoleValue) -> BigRational) -> Vec<BigRational> {
        let role_of = |v: usize| -> Role { role_of_vertex(&self.spec, v) };
        (0..self.spec.vertex_count())
            .map(|v| pick(self.roles.iter().find(|r| r.role == role_of(v)).expect("role present")))
            .collect()
    }
}

fn role_of_vertex(spec: &FamilySpec, v: usize) -> Role {
    match *spec {
        FamilySpec::Wheel { n } | FamilySpec::Star { n } if v == n - 1 => Role::Center,
        FamilySpec::Wheel { .. } | FamilySpec::Star { .. } => Role::Periphery,
        FamilySpec::Path { n } if n > 1 && (v == 0 || v == n - 1) => Role::Ends,
        FamilySpec::Path { n } if n > 1 => Role::Middle,
        FamilySpec::CompleteBipartite { m, .. } if v < m => Role::MSide,
        FamilySpec::CompleteBipartite { .. } => Role::NSide,
        _ => Role::All,
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Role multiplicities and closed-form Shapley values, one entry per role.
fn shapley_by_role(spec: &FamilySpec) -> Result<Vec<(Role, usize, BigRational)>> {
    spec.validate()?;
    let roles = match *spec {
        FamilySpec::Complete { n } => vec![(Role::All, n, q(1, n as i64))],
        FamilySpec::Cycle { n } => vec![(Role::All, n, q(2, 3) - q(1, n as i64))],
        FamilySpec::Wheel { n } => {
            let n = n as i64;
            vec![
                (Role::Periphery, (n - 1) as usize, q(1, 3) - q(1, n * (n - 1))),
                (Role::Center, 1, q(n * n - 7 * n + 18, 6 * n)),
            ]
        }
        FamilySpec::Star { n } => {
            let n = n as i64;
            vec![(Role::Periphery, (n - 1) as usize, q(1, 2)), (Role::Center, 1, q(n * n - 3 * n + 4, 2 * n))]
        }
        // A lone vertex contributes 1 on its own; the two-endpoint formulas start at n = 2.
        FamilySpec::Path { n: 1 } => vec![(Role::All, 1, q(1, 1))],
        FamilySpec::Path { n } => vec![(Role::Ends, 2, q(1, 2)), (Role::Middle, n - 2, q(2, 3))],
        FamilySpec::CompleteBipartite { m, n } => {
            let (mi, ni) = (m as i64, n as i64);
            vec![
                (Role::MSide, m, q(ni * (ni - 1), mi * (mi + 1) * (mi + ni)) + q(1, ni + 1)),
                (Role::NSide, n, q(mi * (mi - 1), ni * (ni + 1) * (mi + ni)) + q(1, mi + 1)),
            ]
        }
        FamilySpec::ErdosRenyi { .. } => return Err(Error::NoClosedForm(spec.to_string())),
    };
    Ok(roles)
}

/// Closed-form Shapley values with influence obtained by normalization.
pub fn closed_form(spec: &FamilySpec) -> Result<ClosedFormResult> {
    let roles = shapley_by_role(spec)?;
    let total: BigRational = roles.iter().map(|(_, mult, s)| int(*mult) * s).sum();
    let roles: Vec<RoleValue> = roles
        .into_iter()
        .map(|(role, multiplicity, shapley)| RoleValue { role, multiplicity, influence: &shapley / &total, shapley })
        .collect();
    let entropy = role_entropy(&roles);
    Ok(ClosedFormResult { spec: *spec, roles, entropy })
}

fn role_entropy(roles: &[RoleValue]) -> f64 {
    roles
        .iter()
        .filter(|r| r.multiplicity > 0 && !r.influence.is_zero())
        .map(|r| {
            let mu = r.influence.to_f64().expect("finite");
            -(r.multiplicity as f64) * mu * mu.ln()
        })
        .sum()
}

/// Influence expressions as printed for each family, written out
/// independently of the normalization in [`closed_form`].
pub fn tabulated_influence(spec: &FamilySpec) -> Result<Vec<(Role, BigRational)>> {
    spec.validate()?;
    Ok(match *spec {
        FamilySpec::Complete { n } | FamilySpec::Cycle { n } => vec![(Role::All, q(1, n as i64))],
        FamilySpec::Wheel { n } => {
            let n = n as i64;
            vec![
                (Role::Periphery, q(2 * (n * n - n - 3), 3 * (n - 1) * (n * n - 3 * n + 4))),
                (Role::Center, q(n * n - 7 * n + 18, 3 * (n * n - 3 * n + 4))),
            ]
        }
        FamilySpec::Star { n } => {
            let n = n as i64;
            vec![
                (Role::Periphery, q(n, 2 * (n * n - 2 * n + 2))),
                (Role::Center, q(n * n - 3 * n + 4, 2 * (n * n - 2 * n + 2))),
            ]
        }
        FamilySpec::Path { n: 1 } => vec![(Role::All, q(1, 1))],
        FamilySpec::Path { n } => {
            let n = n as i64;
            vec![(Role::Ends, q(3, 2 * (2 * n - 1))), (Role::Middle, q(2, 2 * n - 1))]
        }
        FamilySpec::CompleteBipartite { m, n } => {
            let (m, n) = (m as i64, n as i64);
            let den = 2 * m * m + 2 * n * n + m + n - m * n - 1;
            vec![
                (Role::MSide, q(m.pow(3) + n.pow(3) + m * m * n + m * n + m * m - n, m * (m + n) * den)),
                (Role::NSide, q(m.pow(3) + n.pow(3) + n * n * m + m * n + n * n - m, n * (m + n) * den)),
            ]
        }
        FamilySpec::ErdosRenyi { .. } => return Err(Error::NoClosedForm(spec.to_string())),
    })
}

/// Entropy of the closed-form influence measure (nats).
pub fn family_entropy(spec: &FamilySpec) -> Result<f64> {
    Ok(closed_form(spec)?.entropy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityMismatch {
    pub identity: u8,
    pub params: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Number of parameter tuples checked per identity.
    pub checked: [usize; 3],
    pub mismatches: Vec<IdentityMismatch>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn factorials(limit: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for k in 1..=limit {
        let next = &f[k - 1] * BigInt::from(k);
        f.push(next);
    }
    f
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// `(1/N!) Σ_{k=0}^{N-m} C(N-m, k) k! (N-k-1)!` (should equal `1/m`).
pub fn identity_one_lhs(big_n: usize, m: usize) -> BigRational {
    let f = factorials(big_n);
    let sum: BigInt = (0..=big_n - m).map(|k| binomial(big_n - m, k) * &f[k] * &f[big_n - k - 1]).sum();
    BigRational::new(sum, f[big_n].clone())
}

/// `(1/(m+n)!) Σ_{k=2}^{m} C(m, k) (k-1) k! (m+n-k-1)!` (should equal `m(m-1)/(n(n+1)(m+n))`).
pub fn identity_two_lhs(m: usize, n: usize) -> BigRational {
    let f = factorials(m + n);
    let sum: BigInt =
        (2..=m).map(|k| binomial(m, k) * BigInt::from(k - 1) * &f[k] * &f[m + n - k - 1]).sum();
    BigRational::new(sum, f[m + n].clone())
}

/// `(1/N!) Σ_{m=2}^{N-3} Σ_{k=2}^{min(m, N-m-1)} T(N-1, k, m) (k-1) m! (N-m-1)!`
/// with `T(N, k, m) = (N/m) C(m, k) C(N-m-1, k-1)` (should equal `(N-3)(N-4)/(6N)`).
pub fn identity_three_lhs(big_n: usize) -> BigRational {
    let f = factorials(big_n);
    let mut sum = BigRational::zero();
    for m in 2..=big_n.saturating_sub(3) {
        let top = m.min(big_n - m - 1);
        for k in 2..=top {
            let t = BigRational::new(BigInt::from(big_n - 1) * binomial(m, k) * binomial(big_n - m - 2, k - 1), BigInt::from(m));
            sum += t * BigRational::from_integer(BigInt::from(k - 1) * &f[m] * &f[big_n - m - 1]);
        }
    }
    sum / BigRational::from_integer(f[big_n].clone())
}

/// Checks the three combinatorial facts used by the wheel, star, path and
/// bipartite derivations, in exact arithmetic:
///
/// 1. for `1 <= m <= N <= n_max`: identity one equals `1/m`;
/// 2. for `1 <= m <= m_max`, `n >= 1`, `m + n <= n_max`: identity two;
/// 3. for `3 <= N <= n_max`: identity three.
pub fn verify_appendix_identities(n_max: usize, m_max: usize) -> Result<IdentityReport> {
    if n_max > 25 {
        return Err(Error::InvalidParameter(format!("n_max {n_max} exceeds 25")));
    }
    let mut report = IdentityReport::default();
    let check = |report: &mut IdentityReport, identity: u8, params: Vec<usize>, lhs: BigRational, rhs: BigRational| {
        report.checked[identity as usize - 1] += 1;
        if lhs != rhs {
            report.mismatches.push(IdentityMismatch { identity, params, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    };
    for big_n in 1..=n_max {
        for m in 1..=big_n {
            check(&mut report, 1, vec![big_n, m], identity_one_lhs(big_n, m), q(1, m as i64));
        }
    }
    for m in 1..=m_max {
        for n in 1..=n_max.saturating_sub(m) {
            let (mi, ni) = (m as i64, n as i64);
            let rhs = q(mi * (mi - 1), ni * (ni + 1) * (mi + ni));
            check(&mut report, 2, vec![m, n], identity_two_lhs(m, n), rhs);
        }
    }
    for big_n in 3..=n_max {
        let ni = big_n as i64;
        check(&mut report, 3, vec![big_n], identity_three_lhs(big_n), q((ni - 3) * (ni - 4), 6 * ni));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapley::exact_shapley;

    #[test]
    fn generators() {
        let star = make_family(&FamilySpec::Star { n: 4 }).unwrap();
        assert_eq!(star.degree(3), 3);
        for leaf in 0..3 {
            assert_eq!(star.neighbors(leaf).collect::<Vec<_>>(), vec![3]);
        }
        let c3 = make_family(&FamilySpec::Cycle { n: 3 }).unwrap();
        let k3 = make_family(&FamilySpec::Complete { n: 3 }).unwrap();
        assert!(c3.is_subcomplex_of(&k3) && k3.is_subcomplex_of(&c3));
        let er = make_family(&FamilySpec::ErdosRenyi { n: 10, p: 0.0, seed: 9 }).unwrap();
        assert_eq!(er.edge_count(), 0);
        let full = make_family(&FamilySpec::ErdosRenyi { n: 10, p: 1.0, seed: 9 }).unwrap();
        assert_eq!(full.edge_count(), 45);
        let a = make_family(&FamilySpec::ErdosRenyi { n: 12, p: 0.3, seed: 5 }).unwrap();
        let b = make_family(&FamilySpec::ErdosRenyi { n: 12, p: 0.3, seed: 5 }).unwrap();
        assert_eq!(a, b);
        let wheel = make_family(&FamilySpec::Wheel { n: 6 }).unwrap();
        assert_eq!(wheel.edge_count(), 10);
        let kmn = make_family(&FamilySpec::CompleteBipartite { m: 2, n: 3 }).unwrap();
        assert_eq!(kmn.edge_count(), 6);
        assert!(!kmn.has_edge(0, 1));
    }

    #[test]
    fn wheel_six() {
        let cf = closed_form(&FamilySpec::Wheel { n: 6 }).unwrap();
        let by_role = |role| cf.roles.iter().find(|r| r.role == role).unwrap();
        assert_eq!(by_role(Role::Periphery).influence, q(54, 330));
        assert_eq!(by_role(Role::Periphery).influence, q(9, 55));
        assert_eq!(by_role(Role::Center).influence, q(12, 66));
        assert_eq!(by_role(Role::Periphery).shapley, q(3, 10));
        assert_eq!(by_role(Role::Center).shapley, q(1, 3));
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            FamilySpec::Cycle { n: 2 },
            FamilySpec::Wheel { n: 3 },
            FamilySpec::Star { n: 1 },
            FamilySpec::Complete { n: 0 },
            FamilySpec::CompleteBipartite { m: 0, n: 2 },
            FamilySpec::ErdosRenyi { n: 3, p: 1.5, seed: 0 },
        ] {
            assert!(matches!(make_family(&spec), Err(Error::InvalidFamily(_))), "{spec}");
        }
        assert!(matches!(closed_form(&FamilySpec::ErdosRenyi { n: 3, p: 0.5, seed: 0 }), Err(Error::NoClosedForm(_))));
    }

    #[test]
    fn path_and_star_influence() {
        for n in 2..=20i64 {
            let cf = closed_form(&FamilySpec::Path { n: n as usize }).unwrap();
            assert_eq!(cf.roles[0].influence, q(3, 2 * (2 * n - 1)));
            assert_eq!(cf.roles[1].influence, q(2, 2 * n - 1));
            let cf = closed_form(&FamilySpec::Star { n: n as usize }).unwrap();
            assert_eq!(cf.roles[0].influence, q(n, 2 * (n * n - 2 * n + 2)));
        }
        let cf = closed_form(&FamilySpec::CompleteBipartite { m: 2, n: 2 }).unwrap();
        assert!(cf.roles.iter().all(|r| r.influence == q(1, 4)));
    }

    #[test]
    fn wheel_six_influence() {
        // periphery 2(36-6-3)/(3·5·22) = 54/330, center 12/66
        let cf = closed_form(&FamilySpec::Wheel { n: 6 }).unwrap();
        assert_eq!(cf.roles[0].influence, q(9, 55));
        assert_eq!(cf.roles[1].influence, q(2, 11));
        let mu = closed_form(&FamilySpec::Wheel { n: 6 }).unwrap().vertex_influence();
        assert_eq!(mu.len(), 6);
        assert_eq!(mu[5], q(2, 11));
    }

    #[test]
    fn tabulated_matches_normalized() {
        let mut specs = Vec::new();
        for n in 1..=50 {
            specs.push(FamilySpec::Complete { n });
            specs.push(FamilySpec::Path { n });
            if n >= 3 {
                specs.push(FamilySpec::Cycle { n });
            }
            if n >= 4 {
                specs.push(FamilySpec::Wheel { n });
            }
            if n >= 2 {
                specs.push(FamilySpec::Star { n });
            }
        }
        for m in 1..=25 {
            for n in 1..=25 {
                specs.push(FamilySpec::CompleteBipartite { m, n });
            }
        }
        for spec in specs {
            let cf = closed_form(&spec).unwrap();
            let printed = tabulated_influence(&spec).unwrap();
            for (role, value) in printed {
                if let Some(r) = cf.roles.iter().find(|r| r.role == role && r.multiplicity > 0) {
                    assert_eq!(r.influence, value, "{spec} {role:?}");
                }
            }
            let total: BigRational = cf.roles.iter().map(|r| int(r.multiplicity) * &r.influence).sum();
            assert_eq!(total, q(1, 1), "{spec}");
        }
    }

    #[test]
    fn entropy_examples() {
        for n in 3..=12 {
            let hk = family_entropy(&FamilySpec::Complete { n }).unwrap();
            let hc = family_entropy(&FamilySpec::Cycle { n }).unwrap();
            assert!((hk - (n as f64).ln()).abs() < 1e-12);
            assert!((hc - hk).abs() < 1e-12);
            let hb = family_entropy(&FamilySpec::CompleteBipartite { m: n, n }).unwrap();
            assert!((hb - (2.0 * n as f64).ln()).abs() < 1e-12);
        }
        let k6 = family_entropy(&FamilySpec::Complete { n: 6 }).unwrap();
        let w6 = family_entropy(&FamilySpec::Wheel { n: 6 }).unwrap();
        let s5 = family_entropy(&FamilySpec::Star { n: 6 }).unwrap();
        assert!(k6 > w6 && w6 > s5);
    }

    #[test]
    fn identity_examples() {
        // Direct evaluation at N = 5, m = 2: (C(3,0)0!4! + C(3,1)1!3! + C(3,2)2!2! + C(3,3)3!1!)/5!
        //   = (24 + 18 + 12 + 6)/120 = 1/2.
        assert_eq!(identity_one_lhs(5, 2), q(1, 2));
        assert_eq!(identity_three_lhs(5), q(1, 15));
        assert_eq!(identity_two_lhs(1, 4), q(0, 1));
        let report = verify_appendix_identities(12, 12).unwrap();
        assert!(report.all_hold(), "{:?}", report.mismatches);
        assert!(verify_appendix_identities(26, 3).is_err());
    }

    #[test]
    fn closed_form_matches_enumeration_small() {
        for spec in [FamilySpec::Wheel { n: 7 }, FamilySpec::CompleteBipartite { m: 2, n: 5 }, FamilySpec::Path { n: 1 }] {
            let sv = exact_shapley(&make_family(&spec).unwrap()).unwrap();
            assert_eq!(sv.exact_values().unwrap(), closed_form(&spec).unwrap().vertex_shapley(), "{spec}");
        }
    }
}
