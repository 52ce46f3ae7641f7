use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{self, is_prime, legendre_unchecked, next_prime};
use crate::error::{validation, Error, Result};
use crate::Limits;

/// Whether `Σ_{p ∈ A} 1/p` converges, as far as the constructor can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    Yes,
    No,
    Unknown,
}

/// The constructor family a [`PrimeSet`] was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind {
    Empty,
    Finite { primes: Vec<u64> },
    AllPrimes,
    Residues { modulus: u64, classes: Vec<u64> },
    NonResiduesMod { p: u64 },
    Tail { from: u64 },
    CubeGap,
    Complement { inner: Box<PrimeSet> },
}

/// A subset of the primes with a total membership predicate and a
/// reciprocal-sum convergence flag fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSet {
    #[serde(flatten)]
    kind: SetKind,
    reciprocal_sum_converges: Convergence,
}

impl PrimeSet {
    pub fn empty() -> Self {
        Self::from_kind(SetKind::Empty)
    }

    pub fn all() -> Self {
        Self::from_kind(SetKind::AllPrimes)
    }

    pub fn cube_gap() -> Self {
        Self::from_kind(SetKind::CubeGap)
    }

    /// A finite list of primes; sorted and de-duplicated on the way in.
    pub fn finite(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        if let Some(&bad) = primes.iter().find(|&&q| !is_prime(q)) {
            return Err(validation(format!("finite set entry {bad} is not prime")));
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(Self::from_kind(SetKind::Finite { primes }))
    }

    /// Primes whose residue mod `modulus` lies in `classes`.
    pub fn residues(modulus: u64, classes: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(validation("residue modulus must be at least 2"));
        }
        let mut classes: Vec<u64> = classes.into_iter().collect();
        if classes.is_empty() {
            return Err(validation("residue class list is empty"));
        }
        if let Some(&bad) = classes.iter().find(|&&c| c >= modulus) {
            return Err(validation(format!("residue {bad} is not reduced modulo {modulus}")));
        }
        classes.sort_unstable();
        classes.dedup();
        Ok(Self::from_kind(SetKind::Residues { modulus, classes }))
    }

    /// Primes `q` with `(q/p) = -1`.
    pub fn nonresidues(p: u64) -> Result<Self> {
        arith::check_odd_prime(p).map_err(|e| validation(e.to_string()))?;
        Ok(Self::from_kind(SetKind::NonResiduesMod { p }))
    }

    /// All primes `>= from`.
    pub fn tail(from: u64) -> Result<Self> {
        if from < 2 {
            return Err(validation("tail start must be at least 2"));
        }
        Ok(Self::from_kind(SetKind::Tail { from }))
    }

    pub fn complement(inner: PrimeSet) -> Self {
        Self::from_kind(SetKind::Complement { inner: Box::new(inner) })
    }

    fn from_kind(kind: SetKind) -> Self {
        let reciprocal_sum_converges = convergence_of(&kind);
        PrimeSet {
            kind,
            reciprocal_sum_converges,
        }
    }

    #[cfg(test)]
    pub(crate) fn with_convergence(mut self, c: Convergence) -> Self {
        self.reciprocal_sum_converges = c;
        self
    }

    /// The same set with nested double complements removed.
    pub fn simplified(&self) -> PrimeSet {
        match &self.kind {
            SetKind::Complement { inner } => match &inner.kind {
                SetKind::Complement { inner } => inner.simplified(),
                _ => PrimeSet::complement(inner.simplified()),
            },
            _ => self.clone(),
        }
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn reciprocal_sum_converges(&self) -> Convergence {
        self.reciprocal_sum_converges
    }

    /// Membership for a prime `q`. Non-primes are never members.
    pub fn contains(&self, q: u64) -> bool {
        is_prime(q) && self.contains_prime(q)
    }

    /// Membership for `q` already known to be prime.
    pub fn contains_prime(&self, q: u64) -> bool {
        match &self.kind {
            SetKind::Empty => false,
            SetKind::AllPrimes => true,
            SetKind::Finite { primes } => primes.binary_search(&q).is_ok(),
            SetKind::Residues { modulus, classes } => classes.binary_search(&(q % modulus)).is_ok(),
            SetKind::NonResiduesMod { p } => legendre_unchecked(q % p, *p) == -1,
            SetKind::Tail { from } => q >= *from,
            SetKind::CubeGap => is_cube_gap_prime(q),
            SetKind::Complement { inner } => !inner.contains_prime(q),
        }
    }

    /// `λ_A(q)` for a prime `q`.
    #[inline]
    pub fn sign_at_prime(&self, q: u64) -> i8 {
        if self.contains_prime(q) {
            -1
        } else {
            1
        }
    }

    /// The members when the set is finite and small enough to list.
    ///
    /// `Ok(None)` means the set is infinite (or not known to be finite).
    pub fn finite_members(&self, limits: &Limits) -> Result<Option<Vec<u64>>> {
        Ok(match &self.kind {
            SetKind::Empty => Some(Vec::new()),
            SetKind::Finite { primes } => Some(primes.clone()),
            SetKind::Residues { modulus, classes } if self.reciprocal_sum_converges == Convergence::Yes => Some(
                prime_divisors(*modulus)
                    .filter(|q| classes.contains(&(q % modulus)))
                    .collect(),
            ),
            SetKind::Complement { inner } => match &inner.kind {
                SetKind::AllPrimes => Some(Vec::new()),
                SetKind::Tail { from } => Some(arith::primes_up_to(from - 1, limits)?),
                SetKind::Residues { modulus, classes } if self.reciprocal_sum_converges == Convergence::Yes => Some(
                    prime_divisors(*modulus)
                        .filter(|q| !classes.contains(&(q % modulus)))
                        .collect(),
                ),
                SetKind::Complement { inner } => inner.finite_members(limits)?,
                _ => None,
            },
            _ => None,
        })
    }

    /// Every member `<= limit`, ascending.
    pub fn members_up_to(&self, limit: u64, limits: &Limits) -> Result<Vec<u64>> {
        match &self.kind {
            SetKind::Empty => Ok(Vec::new()),
            SetKind::Finite { primes } => Ok(primes.iter().copied().filter(|&q| q <= limit).collect()),
            SetKind::CubeGap => Ok(cube_gap_primes_up_to(limit)),
            _ => Ok(arith::primes_up_to(limit, limits)?
                .into_iter()
                .filter(|&q| self.contains_prime(q))
                .collect()),
        }
    }

    /// Smallest member found by scanning primes up to `search_limit`.
    pub fn smallest_member(&self, search_limit: u64) -> Option<u64> {
        match &self.kind {
            SetKind::Empty => None,
            SetKind::Finite { primes } => primes.first().copied(),
            SetKind::CubeGap => Some(11),
            _ => {
                let mut q = 2;
                while q <= search_limit {
                    if self.contains_prime(q) {
                        return Some(q);
                    }
                    q = next_prime(q)?;
                }
                None
            }
        }
    }

    /// True when the set provably has no members.
    pub fn is_provably_empty(&self) -> bool {
        match &self.kind {
            SetKind::Empty => true,
            SetKind::Finite { primes } => primes.is_empty(),
            SetKind::Complement { inner } => match &inner.kind {
                SetKind::AllPrimes => true,
                SetKind::Complement { inner } => inner.is_provably_empty(),
                _ => false,
            },
            _ => false,
        }
    }

    pub(crate) fn compile(&self, bound: u64) -> Membership {
        Membership::build(self, bound)
    }
}

fn prime_divisors(m: u64) -> impl Iterator<Item = u64> {
    arith::factorize(m)
        .map(|f| f.primes().collect::<Vec<_>>())
        .unwrap_or_default()
        .into_iter()
}

fn has_coprime_class(modulus: u64, mut classes: impl Iterator<Item = u64>) -> bool {
    classes.any(|c| c.gcd(&modulus) == 1)
}

fn convergence_of(kind: &SetKind) -> Convergence {
    match kind {
        SetKind::Empty | SetKind::Finite { .. } | SetKind::CubeGap => Convergence::Yes,
        SetKind::AllPrimes | SetKind::Tail { .. } | SetKind::NonResiduesMod { .. } => Convergence::No,
        // Dirichlet: a reduced class mod m holds infinitely many primes with
        // reciprocal sum diverging; non-reduced classes hold at most one prime.
        SetKind::Residues { modulus, classes } => {
            if has_coprime_class(*modulus, classes.iter().copied()) {
                Convergence::No
            } else {
                Convergence::Yes
            }
        }
        SetKind::Complement { inner } => match (&inner.kind, inner.reciprocal_sum_converges) {
            (_, Convergence::Yes) => Convergence::No,
            (SetKind::AllPrimes | SetKind::Tail { .. }, _) => Convergence::Yes,
            // complement is the quadratic residues plus p itself
            (SetKind::NonResiduesMod { .. }, _) => Convergence::No,
            (SetKind::Residues { modulus, classes }, _) => {
                let missing = (0..*modulus).filter(|c| classes.binary_search(c).is_err());
                if has_coprime_class(*modulus, missing) {
                    Convergence::No
                } else {
                    Convergence::Yes
                }
            }
            (SetKind::Complement { inner }, _) => inner.reciprocal_sum_converges,
            _ => Convergence::Unknown,
        },
    }
}

/// Largest `n` with `n^3 <= m`.
pub(crate) fn icbrt(m: u64) -> u64 {
    let mut r = (m as f64).cbrt() as u64;
    while r.checked_pow(3).is_none_or(|c| c > m) {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= m) {
        r += 1;
    }
    r
}

/// `q ∈ K` where `K = { least prime exceeding n^3 : n >= 2 }`.
pub fn is_cube_gap_prime(q: u64) -> bool {
    if q < 9 || !is_prime(q) {
        return false;
    }
    let n = icbrt(q - 1);
    n >= 2 && next_prime(n * n * n) == Some(q)
}

/// The first `count` elements of `K`: 11, 29, 67, 127, ...
pub fn cube_gap_primes(count: usize) -> Vec<u64> {
    (2u64..)
        .take(count)
        .map(|n| next_prime(n * n * n).expect("cube below u64 range"))
        .collect()
}

fn cube_gap_primes_up_to(limit: u64) -> Vec<u64> {
    (2u64..)
        .map(|n| next_prime(n * n * n).expect("cube below u64 range"))
        .take_while(|&q| q <= limit)
        .collect()
}

/// Constant-time membership oracle compiled for primes up to a bound.
pub(crate) enum Membership {
    Never,
    Always,
    Sorted(Vec<u64>),
    Table { modulus: u64, member: Vec<bool> },
    Set(PrimeSet),
    AtLeast(u64),
    Not(Box<Membership>),
}

const TABLE_LIMIT: u64 = 1 << 22;

impl Membership {
    fn build(set: &PrimeSet, bound: u64) -> Self {
        match &set.kind {
            SetKind::Empty => Membership::Never,
            SetKind::AllPrimes => Membership::Always,
            SetKind::Finite { primes } => Membership::Sorted(primes.clone()),
            SetKind::CubeGap => Membership::Sorted(cube_gap_primes_up_to(bound)),
            SetKind::Tail { from } => Membership::AtLeast(*from),
            SetKind::Residues { modulus, classes } if *modulus <= TABLE_LIMIT => {
                let mut member = vec![false; *modulus as usize];
                for &c in classes {
                    member[c as usize] = true;
                }
                Membership::Table {
                    modulus: *modulus,
                    member,
                }
            }
            SetKind::NonResiduesMod { p } if *p <= TABLE_LIMIT => {
                // nonzero non-squares
                let mut member = vec![true; *p as usize];
                member[0] = false;
                for x in 1..=(*p / 2) {
                    member[(x * x % p) as usize] = false;
                }
                Membership::Table { modulus: *p, member }
            }
            SetKind::Complement { inner } => Membership::Not(Box::new(Membership::build(inner, bound))),
            _ => Membership::Set(set.clone()),
        }
    }

    #[inline]
    pub(crate) fn contains_prime(&self, q: u64) -> bool {
        match self {
            Membership::Never => false,
            Membership::Always => true,
            Membership::Sorted(v) => v.binary_search(&q).is_ok(),
            Membership::Table { modulus, member } => member[(q % modulus) as usize],
            Membership::Set(s) => s.contains_prime(q),
            Membership::AtLeast(k) => q >= *k,
            Membership::Not(inner) => !inner.contains_prime(q),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.kind {
            SetKind::Empty => write!(f, "none"),
            SetKind::AllPrimes => write!(f, "all"),
            SetKind::Finite { primes } => write!(f, "finite:{}", join(primes)),
            SetKind::Residues { modulus, classes } => write!(f, "residues:{modulus}:{}", join(classes)),
            SetKind::NonResiduesMod { p } => write!(f, "nonres:{p}"),
            SetKind::Tail { from } => write!(f, "tail:{from}"),
            SetKind::CubeGap => write!(f, "cubegap"),
            SetKind::Complement { inner } => write!(f, "complement:({inner})"),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| validation(format!("bad integer {t:?} in list")))
        })
        .collect()
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| validation(format!("bad {what}: {s:?}")))
}

impl FromStr for PrimeSet {
    type Err = Error;

    /// Grammar: `all`, `none`, `finite:2,3,5`, `tail:100`, `residues:8:3,5`,
    /// `nonres:7`, `cubegap`, `complement:(<set>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s, None),
        };
        match (head, rest) {
            ("all", None) => Ok(PrimeSet::all()),
            ("none" | "empty", None) => Ok(PrimeSet::empty()),
            ("cubegap", None) => Ok(PrimeSet::cube_gap()),
            ("finite", Some("")) => Ok(PrimeSet::finite([])?),
            ("finite", Some(r)) => PrimeSet::finite(parse_list(r)?),
            ("tail", Some(r)) => PrimeSet::tail(parse_u64(r, "tail start")?),
            ("nonres", Some(r)) => PrimeSet::nonresidues(parse_u64(r, "prime")?),
            ("residues", Some(r)) => {
                let (m, classes) = r
                    .split_once(':')
                    .ok_or_else(|| validation("residues needs `residues:<m>:<r1,r2,...>`"))?;
                PrimeSet::residues(parse_u64(m, "modulus")?, parse_list(classes)?)
            }
            ("complement", Some(r)) => {
                let inner = r
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| validation("complement needs parentheses: `complement:(<set>)`"))?;
                Ok(PrimeSet::complement(inner.parse()?))
            }
            _ => Err(validation(format!("unknown prime set {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> PrimeSet {
        s.parse().unwrap()
    }

    #[test]
    fn finite_membership() {
        let a = PrimeSet::finite([5]).unwrap();
        assert!(a.contains(5));
        assert!((2..100).filter(|&q| q != 5).all(|q| !a.contains(q)));
        assert!(PrimeSet::finite([4]).is_err());
        assert_eq!(set("finite:5,3,5").kind(), &SetKind::Finite { primes: vec![3, 5] });
    }

    #[test]
    fn cube_gap_first_elements() {
        assert_eq!(
            cube_gap_primes(10),
            vec![11, 29, 67, 127, 223, 347, 521, 733, 1009, 1361]
        );
        let k = PrimeSet::cube_gap();
        let listed: Vec<u64> = (2..1400).filter(|&q| k.contains(q)).collect();
        assert_eq!(listed, cube_gap_primes(10));
        assert!(!k.contains(2));
        let many = cube_gap_primes(500);
        assert!(many.windows(2).all(|w| w[0] < w[1]));
        assert!(many.iter().all(|&q| is_cube_gap_prime(q)));
    }

    #[test]
    fn nonresidue_membership() {
        let a = PrimeSet::nonresidues(5).unwrap();
        assert!(a.contains(2) && a.contains(3));
        assert!(!a.contains(11));
        assert!(!a.contains(5));
        assert!(PrimeSet::nonresidues(2).is_err());
        assert!(PrimeSet::nonresidues(9).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(PrimeSet::residues(8, []).is_err());
        assert!(PrimeSet::residues(8, [9]).is_err());
        assert!(PrimeSet::residues(1, [0]).is_err());
        assert!(PrimeSet::tail(1).is_err());
        for bad in ["foo", "finite:2,x", "residues:8", "complement:all", "tail:", "all:3"] {
            assert!(bad.parse::<PrimeSet>().is_err(), "{bad}");
        }
    }

    #[test]
    fn convergence_flags() {
        use Convergence::*;
        let cases = [
            ("none", Yes),
            ("finite:2,3", Yes),
            ("cubegap", Yes),
            ("all", No),
            ("tail:100", No),
            ("nonres:7", No),
            ("residues:8:3,5", No),
            ("residues:6:2,4", Yes),
            ("complement:(finite:2)", No),
            ("complement:(all)", Yes),
            ("complement:(tail:10)", Yes),
            ("complement:(cubegap)", No),
            ("complement:(nonres:5)", No),
            ("complement:(residues:4:1,2,3)", Yes),
            ("complement:(residues:4:1)", No),
            ("complement:(complement:(all))", No),
        ];
        for (s, c) in cases {
            assert_eq!(set(s).reciprocal_sum_converges(), c, "{s}");
        }
    }

    #[test]
    fn grammar_round_trips() {
        for s in [
            "all",
            "none",
            "finite:2,3,5",
            "tail:100",
            "residues:8:3,5",
            "nonres:7",
            "cubegap",
            "complement:(finite:2)",
            "complement:(complement:(residues:5:2,3))",
        ] {
            assert_eq!(set(s).to_string(), s);
        }
    }

    #[test]
    fn finite_members_of_finite_shapes() {
        let lim = Limits::default();
        assert_eq!(
            set("complement:(tail:12)").finite_members(&lim).unwrap(),
            Some(vec![2, 3, 5, 7, 11])
        );
        assert_eq!(set("residues:6:2,3,4").finite_members(&lim).unwrap(), Some(vec![2, 3]));
        assert_eq!(
            set("complement:(residues:4:1,3)").finite_members(&lim).unwrap(),
            Some(vec![2])
        );
        assert_eq!(set("complement:(all)").finite_members(&lim).unwrap(), Some(vec![]));
        assert_eq!(set("cubegap").finite_members(&lim).unwrap(), None);
        assert!(set("complement:(all)").is_provably_empty());
    }

    #[test]
    fn compiled_membership_agrees() {
        let lim = Limits::default();
        let primes = arith::primes_up_to(50_000, &lim).unwrap();
        for s in [
            "all",
            "none",
            "finite:2,7,11",
            "tail:1000",
            "residues:8:3,5",
            "nonres:7",
            "nonres:10007",
            "cubegap",
            "complement:(nonres:5)",
        ] {
            let a = set(s);
            let m = a.compile(50_000);
            for &q in &primes {
                assert_eq!(m.contains_prime(q), a.contains_prime(q), "{s} at {q}");
            }
        }
    }

    #[test]
    fn smallest_members() {
        assert_eq!(set("all").smallest_member(100), Some(2));
        assert_eq!(set("finite:3,5").smallest_member(100), Some(3));
        assert_eq!(set("nonres:7").smallest_member(100), Some(3));
        assert_eq!(set("tail:90").smallest_member(100), Some(97));
        assert_eq!(set("tail:200").smallest_member(100), None);
        assert_eq!(set("cubegap").smallest_member(100), Some(11));
    }

    #[test]
    fn icbrt_edges() {
        assert_eq!(icbrt(0), 0);
        assert_eq!(icbrt(7), 1);
        assert_eq!(icbrt(8), 2);
        assert_eq!(icbrt(26), 2);
        assert_eq!(icbrt(27), 3);
        assert_eq!(icbrt(u64::MAX), 2_642_245);
    }
}
