//! Finite groups stored as explicit Cayley tables.
//!
//! Dihedral and quaternion groups use the order convention: `D_16` and
//! `Q_16` both have sixteen elements. Literature that indexes dihedral
//! groups by the polygon size would call the former `D_8`.

mod presented;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use presented::PresentedGroup;

/// Largest order accepted by the table validator.
pub const MAX_ORDER: usize = 64;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    name: String,
    gap_id: Option<(u32, u32)>,
}

/// One failed group axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Table shape does not match the declared order.
    Shape {
        expected: usize,
        found: usize,
    },
    /// An entry is not a valid element index.
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    NotLatinRow(usize),
    NotLatinColumn(usize),
    /// `identity * g` or `g * identity` differs from `g`.
    Identity(usize),
    /// `g * inv[g]` is not the identity.
    Inverse(usize),
    Associativity {
        a: usize,
        b: usize,
        c: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { expected, found } => {
                write!(f, "table has {found} entries, expected {expected}")
            }
            Violation::OutOfRange { row, col, value } => {
                write!(f, "entry ({row},{col}) = {value} is out of range")
            }
            Violation::NotLatinRow(r) => write!(f, "row {r} is not a permutation"),
            Violation::NotLatinColumn(c) => write!(f, "column {c} is not a permutation"),
            Violation::Identity(g) => write!(f, "identity law fails at element {g}"),
            Violation::Inverse(g) => write!(f, "inverse of element {g} is wrong"),
            Violation::Associativity { a, b, c } => {
                write!(f, "({a}*{b})*{c} != {a}*({b}*{c})")
            }
        }
    }
}

/// JSON form of a group, as written by `gdet catalog`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupRecord {
    pub name: String,
    pub order: usize,
    pub gap_id: Option<(u32, u32)>,
    pub mul: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table, deriving the
    /// identity and inverses, and validates it.
    pub fn from_table(name: impl Into<String>, order: usize, mul: Vec<usize>) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::InvalidOrder {
                order,
                reason: "order must lie in 1..=64",
            });
        }
        if mul.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul[e * order + g] == g && mul[g * order + e] == g))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(order);
        for g in 0..order {
            let h = (0..order)
                .find(|&h| mul[g * order + h] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inv.push(h);
        }
        let group = Self::from_raw_parts(name, order, mul, inv, identity, None);
        group.ensure_valid()?;
        Ok(group)
    }

    /// Assembles a group without any checking. Use [`FiniteGroup::validate`]
    /// to inspect the result.
    pub fn from_raw_parts(
        name: impl Into<String>,
        order: usize,
        mul: Vec<usize>,
        inv: Vec<usize>,
        identity: usize,
        gap_id: Option<(u32, u32)>,
    ) -> Self {
        Self {
            order,
            mul,
            inv,
            identity,
            name: name.into(),
            gap_id,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gap_id(&self) -> Option<(u32, u32)> {
        self.gap_id
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_gap_id(mut self, gap_id: (u32, u32)) -> Self {
        self.gap_id = Some(gap_id);
        self
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    /// Returns every axiom violation; an empty list means the table is a group.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.order;
        let mut out = Vec::new();
        if self.mul.len() != n * n {
            out.push(Violation::Shape {
                expected: n * n,
                found: self.mul.len(),
            });
            return out;
        }
        if self.inv.len() != n || self.identity >= n {
            out.push(Violation::Shape {
                expected: n,
                found: self.inv.len(),
            });
            return out;
        }
        for (i, &v) in self.mul.iter().enumerate() {
            if v >= n {
                out.push(Violation::OutOfRange {
                    row: i / n,
                    col: i % n,
                    value: v,
                });
            }
        }
        if !out.is_empty() {
            return out;
        }

        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                seen[self.mul(r, c)] = true;
            }
            if seen.iter().any(|s| !s) {
                out.push(Violation::NotLatinRow(r));
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                seen[self.mul(r, c)] = true;
            }
            if seen.iter().any(|s| !s) {
                out.push(Violation::NotLatinColumn(c));
            }
        }
        let e = self.identity;
        for g in 0..n {
            if self.mul(e, g) != g || self.mul(g, e) != g {
                out.push(Violation::Identity(g));
            }
            if self.inv[g] >= n || self.mul(g, self.inv[g]) != e {
                out.push(Violation::Inverse(g));
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        out.push(Violation::Associativity { a, b, c });
                        // one witness per table is enough to report
                        break 'assoc;
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = violations.iter().take(4).map(|v| v.to_string()).collect();
            Err(Error::InvalidGroup(format!("{}: {}", self.name, msg.join("; "))))
        }
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Map from element order to the number of elements of that order.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut stats = BTreeMap::new();
        for g in 0..self.order {
            *stats.entry(self.element_order(g)).or_insert(0) += 1;
        }
        stats
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Returns an element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g) == self.order)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    pub fn to_record(&self) -> GroupRecord {
        GroupRecord {
            name: self.name.clone(),
            order: self.order,
            gap_id: self.gap_id,
            mul: self.mul.clone(),
        }
    }

    pub fn from_record(record: &GroupRecord) -> Result<Self> {
        let group = Self::from_table(record.name.clone(), record.order, record.mul.clone())?;
        Ok(match record.gap_id {
            Some(id) => group.with_gap_id(id),
            None => group,
        })
    }
}

/// The cyclic group `C_n` with `g * h = (g + h) mod n`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidOrder {
            order: n,
            reason: "cyclic order must lie in 1..=64",
        });
    }
    let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let inv = (0..n).map(|g| (n - g) % n).collect();
    let group = FiniteGroup::from_raw_parts(format!("C{n}"), n, mul, inv, 0, None);
    Ok(if n == 16 { group.with_gap_id((16, 1)) } else { group })
}

/// The dihedral group of order `n`: elements `r^i s^j` stored at index
/// `i + (n/2) j`, with `s r = r^-1 s`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 4 || !n.is_multiple_of(2) || n > MAX_ORDER {
        return Err(Error::InvalidOrder {
            order: n,
            reason: "dihedral order must be even and at least 4",
        });
    }
    let m = n / 2;
    let product = |g: usize, h: usize| {
        let (i, j) = (g % m, g / m);
        let (k, l) = (h % m, h / m);
        let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
        rot + m * ((j + l) % 2)
    };
    let group = table_group(format!("D{n}"), n, product)?;
    Ok(if n == 16 { group.with_gap_id((16, 7)) } else { group })
}

/// The generalised quaternion group of order `n = 2^a >= 8`:
/// `<a, b | a^(n/2) = e, b^2 = a^(n/4), b a b^-1 = a^-1>`.
pub fn make_quaternion(n: usize) -> Result<FiniteGroup> {
    if n < 8 || !n.is_power_of_two() || n > MAX_ORDER {
        return Err(Error::InvalidOrder {
            order: n,
            reason: "quaternion order must be a power of two, at least 8",
        });
    }
    let m = n / 2;
    let product = |g: usize, h: usize| {
        let (i, j) = (g % m, g / m);
        let (k, l) = (h % m, h / m);
        if j == 0 {
            (i + k) % m + m * l
        } else if l == 0 {
            (i + m - k) % m + m
        } else {
            (i + m - k + m / 2) % m
        }
    };
    let group = table_group(format!("Q{n}"), n, product)?;
    Ok(if n == 16 { group.with_gap_id((16, 9)) } else { group })
}

/// Componentwise product; `(g, h)` is stored at index `g * |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    g.ensure_valid()?;
    h.ensure_valid()?;
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    if n > MAX_ORDER {
        return Err(Error::InvalidOrder {
            order: n,
            reason: "product order exceeds 64",
        });
    }
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mul.push(g.mul(a / nh, b / nh) * nh + h.mul(a % nh, b % nh));
        }
    }
    let inv = (0..n).map(|a| g.inv(a / nh) * nh + h.inv(a % nh)).collect();
    let identity = g.identity() * nh + h.identity();
    let name = format!("{}x{}", g.name(), h.name());
    let product = FiniteGroup::from_raw_parts(name, n, mul, inv, identity, None);
    Ok(product)
}

fn table_group(name: String, n: usize, product: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
    let mul = (0..n * n).map(|i| product(i / n, i % n)).collect();
    FiniteGroup::from_table(name, n, mul)
}

/// The fourteen groups of order 16 with their small-group catalog numbers,
/// listed abelian groups first and then by increasing determinant size.
pub fn catalog_order16() -> Result<Vec<FiniteGroup>> {
    let c2 = make_cyclic(2)?;
    let c4 = make_cyclic(4)?;
    let c8 = make_cyclic(8)?;
    let c2sq = direct_product(&c2, &c2)?;
    let entries: Vec<(u32, &str, FiniteGroup)> = vec![
        (1, "C16", make_cyclic(16)?),
        (5, "C8xC2", direct_product(&c8, &c2)?),
        (2, "C4xC4", direct_product(&c4, &c4)?),
        (10, "C4xC2^2", direct_product(&c4, &c2sq)?),
        (14, "C2^4", direct_product(&direct_product(&c2sq, &c2)?, &c2)?),
        (11, "D8xC2", direct_product(&make_dihedral(8)?, &c2)?),
        (13, "Q8:C2", PresentedGroup::Q8RtimesC2.build()?),
        (3, "C2^2:C4", PresentedGroup::C2sqRtimesC4.build()?),
        (4, "C4:C4", PresentedGroup::C4RtimesC4.build()?),
        (6, "C8:5C2", PresentedGroup::C8Rtimes5C2.build()?),
        (12, "Q8xC2", direct_product(&make_quaternion(8)?, &c2)?),
        (8, "C8:3C2", PresentedGroup::C8Rtimes3C2.build()?),
        (9, "Q16", make_quaternion(16)?),
        (7, "D16", make_dihedral(16)?),
    ];
    Ok(entries
        .into_iter()
        .map(|(id, name, g)| g.with_name(name).with_gap_id((16, id)))
        .collect())
}

/// The five groups of order 8, abelian groups first.
pub fn catalog_order8() -> Result<Vec<FiniteGroup>> {
    let c2 = make_cyclic(2)?;
    let c4 = make_cyclic(4)?;
    let entries: Vec<(u32, &str, FiniteGroup)> = vec![
        (1, "C8", make_cyclic(8)?),
        (2, "C4xC2", direct_product(&c4, &c2)?),
        (5, "C2^3", direct_product(&direct_product(&c2, &c2)?, &c2)?),
        (3, "D8", make_dihedral(8)?),
        (4, "Q8", make_quaternion(8)?),
    ];
    Ok(entries
        .into_iter()
        .map(|(id, name, g)| g.with_name(name).with_gap_id((8, id)))
        .collect())
}

/// Catalogued groups of the given order.
pub fn catalog(order: usize) -> Result<Vec<FiniteGroup>> {
    match order {
        8 => catalog_order8(),
        16 => catalog_order16(),
        _ => Err(Error::InvalidArgument(format!(
            "no catalog for order {order} (available: 8, 16)"
        ))),
    }
}

/// Normalises a user-facing group name: drops underscores, spaces and the
/// `x`/`×` spelling differences.
pub fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| *c != '_' && !c.is_whitespace())
        .map(|c| match c {
            '×' => 'x',
            '⋊' => ':',
            c => c.to_ascii_uppercase(),
        })
        .collect::<String>()
        .replace('X', "x")
}

/// Resolves a group by name (`C_8`, `D16`, `Q8xC2`, ...) against the
/// constructors and the order-16 catalog.
pub fn group_by_name(name: &str) -> Result<FiniteGroup> {
    let key = normalize_name(name);
    let unknown = || Error::UnknownGroup(name.to_string());
    if let Some(found) = catalog_order16()?
        .into_iter()
        .chain(catalog_order8()?)
        .find(|g| normalize_name(g.name()) == key)
    {
        return Ok(found);
    }
    let parse_tail = |prefix: char| -> Option<usize> { key.strip_prefix(prefix).and_then(|t| t.parse::<usize>().ok()) };
    if let Some(n) = parse_tail('C') {
        return make_cyclic(n);
    }
    if let Some(n) = parse_tail('D') {
        return make_dihedral(n);
    }
    if let Some(n) = parse_tail('Q') {
        return make_quaternion(n);
    }
    Err(unknown())
}

/// Resolves a catalog id `(order, number)` for orders 8 and 16.
pub fn group_by_gap_id(order: u32, number: u32) -> Result<FiniteGroup> {
    catalog(order as usize)
        .map_err(|_| Error::UnknownGroup(format!("{order},{number}")))?
        .into_iter()
        .find(|g| g.gap_id() == Some((order, number)))
        .ok_or_else(|| Error::UnknownGroup(format!("{order},{number}")))
}
