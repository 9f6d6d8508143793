use num_integer::Integer as _;

/// Eventually periodic subset of `N`: membership of `0..p` is listed in
/// `prefix`, membership of `p + k` is `period[k mod L]`. Always stored with
/// minimal period and then minimal prefix, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Shared `(prefix length, period length)` frame of several sets.
pub(crate) fn common_frame<'a>(sets: impl IntoIterator<Item = &'a IndexSet>) -> (usize, usize) {
    sets.into_iter()
        .fold((0, 1), |(p, l), s| (p.max(s.prefix.len()), l.lcm(&s.period.len())))
}

impl IndexSet {
    /// `None` if `period` is empty.
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Option<Self> {
        if period.is_empty() {
            return None;
        }
        let mut s = Self { prefix, period };
        s.normalize();
        Some(s)
    }

    fn normalize(&mut self) {
        let l = self.period.len();
        if let Some(d) = divisors(l)
            .into_iter()
            .find(|&d| (0..l).all(|i| self.period[i] == self.period[i % d]))
        {
            self.period.truncate(d);
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    /// Membership of `0..prefix_len` and of one period starting at `prefix_len`
    /// from a predicate.
    pub fn from_predicate(prefix_len: usize, period_len: usize, pred: impl Fn(u64) -> bool) -> Self {
        assert!(period_len > 0, "period must be nonempty");
        let prefix = (0..prefix_len).map(|i| pred(i as u64)).collect();
        let period = (0..period_len).map(|k| pred((prefix_len + k) as u64)).collect();
        Self::new(prefix, period).unwrap()
    }

    pub fn empty() -> Self {
        Self { prefix: Vec::new(), period: vec![false] }
    }

    pub fn all() -> Self {
        Self { prefix: Vec::new(), period: vec![true] }
    }

    pub fn evens() -> Self {
        Self::residue_class(2, 0)
    }

    pub fn odds() -> Self {
        Self::residue_class(2, 1)
    }

    /// `{i : i ≡ r (mod m)}`.
    pub fn residue_class(m: usize, r: usize) -> Self {
        assert!(m > 0);
        let mut period = vec![false; m];
        period[r % m] = true;
        Self::new(Vec::new(), period).unwrap()
    }

    /// `{i ≥ start : i ≡ start + r (mod m)}`.
    pub fn tail_class(start: usize, m: usize, r: usize) -> Self {
        assert!(m > 0);
        let mut period = vec![false; m];
        period[r % m] = true;
        Self::new(vec![false; start], period).unwrap()
    }

    /// `{i : i ≥ n}`.
    pub fn at_least(n: usize) -> Self {
        Self::new(vec![false; n], vec![true]).unwrap()
    }

    pub fn finite(points: &[u64]) -> Self {
        let len = points.iter().max().map_or(0, |&m| m as usize + 1);
        let mut prefix = vec![false; len];
        for &p in points {
            prefix[p as usize] = true;
        }
        Self::new(prefix, vec![false]).unwrap()
    }

    pub fn singleton(i: u64) -> Self {
        Self::finite(&[i])
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn contains(&self, i: u64) -> bool {
        let p = self.prefix.len() as u64;
        if i < p {
            self.prefix[i as usize]
        } else {
            self.period[((i - p) % self.period.len() as u64) as usize]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.iter().all(|b| !b)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|b| !b)
    }

    pub fn is_all(&self) -> bool {
        *self == Self::all()
    }

    /// Number of elements, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then(|| self.prefix.iter().filter(|&&b| b).count())
    }

    pub fn first(&self) -> Option<u64> {
        self.nth(0)
    }

    /// The `n`-th element (0-based) in increasing order.
    pub fn nth(&self, n: u64) -> Option<u64> {
        let in_prefix = self.prefix.iter().filter(|&&b| b).count() as u64;
        if n < in_prefix {
            return self
                .prefix
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .nth(n as usize)
                .map(|(i, _)| i as u64);
        }
        let per_cycle = self.period.iter().filter(|&&b| b).count() as u64;
        if per_cycle == 0 {
            return None;
        }
        let rest = n - in_prefix;
        let (cycles, r) = (rest / per_cycle, rest % per_cycle);
        let offset = self.period.iter().enumerate().filter(|(_, &b)| b).nth(r as usize).unwrap().0 as u64;
        Some(self.prefix.len() as u64 + cycles * self.period.len() as u64 + offset)
    }

    /// Elements in increasing order (infinite iterator for infinite sets).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let p = self.prefix.len() as u64;
        let finite = self.is_finite();
        (0u64..).take_while(move |&i| !finite || i < p).filter(move |&i| self.contains(i))
    }

    pub fn take(&self, k: usize) -> Vec<u64> {
        self.iter().take(k).collect()
    }

    fn combine(&self, other: &IndexSet, op: impl Fn(bool, bool) -> bool) -> IndexSet {
        let (p, l) = common_frame([self, other]);
        Self::from_predicate(p, l, |i| op(self.contains(i), other.contains(i)))
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Splits into the finitely many prefix points and the periodic classes
    /// `{start + r + k·L : k ≥ 0}` making up the rest.
    pub fn decompose(&self) -> (Vec<u64>, Vec<(u64, u64)>) {
        let points = (0..self.prefix.len() as u64).filter(|&i| self.prefix[i as usize]).collect();
        let p = self.prefix.len() as u64;
        let l = self.period.len() as u64;
        let classes = (0..l).filter(|&r| self.period[r as usize]).map(|r| (p + r, l)).collect();
        (points, classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_is_canonical() {
        let a = IndexSet::new(vec![true, false, true, false], vec![true, false, true, false]).unwrap();
        assert_eq!(a, IndexSet::evens());
        assert_eq!(a.prefix().len(), 0);
        assert_eq!(a.period(), &[true, false]);
        let b = IndexSet::new(vec![false, true], vec![false, true, false, true]).unwrap();
        assert_eq!(b, IndexSet::odds());
        assert!(IndexSet::new(vec![], vec![]).is_none());
    }

    #[test]
    fn set_algebra() {
        let ev = IndexSet::evens();
        let m3 = IndexSet::residue_class(3, 0);
        let six = ev.intersect(&m3);
        assert_eq!(six, IndexSet::residue_class(6, 0));
        assert_eq!(ev.union(&IndexSet::odds()), IndexSet::all());
        assert_eq!(ev.complement(), IndexSet::odds());
        assert!(ev.difference(&IndexSet::all()).is_empty());
        assert!(six.is_subset(&ev));
        assert!(ev.is_disjoint(&IndexSet::odds()));
    }

    #[test]
    fn enumeration() {
        let s = IndexSet::new(vec![true, false, false, true], vec![false, true, true]).unwrap();
        assert_eq!(s.take(7), vec![0, 3, 5, 6, 8, 9, 11]);
        for n in 0..20 {
            assert_eq!(s.nth(n), s.iter().nth(n as usize));
        }
        let f = IndexSet::finite(&[4, 1, 9]);
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![1, 4, 9]);
        assert_eq!(f.len(), Some(3));
        assert_eq!(f.nth(3), None);
        assert!(IndexSet::empty().is_empty());
        assert_eq!(IndexSet::empty().first(), None);
        assert_eq!(IndexSet::at_least(5).first(), Some(5));
    }

    #[test]
    fn decompose_covers_set() {
        let s = IndexSet::new(vec![true, false], vec![true, false, true]).unwrap();
        let (points, classes) = s.decompose();
        for i in 0..60u64 {
            let hit = points.contains(&i) || classes.iter().any(|&(a, l)| i >= a && (i - a) % l == 0);
            assert_eq!(hit, s.contains(i), "index {i}");
        }
    }
}
