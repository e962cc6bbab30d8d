//! Short Weierstrass curves `y² = x³ + Ax + B` over `F_q` and their point counts.

use std::fmt;

use crate::error::{precondition, Error, Result};
use crate::padic_arith::{check_prime, FiniteField, FqElement};
use crate::par;

#[derive(Clone, Debug)]
pub struct CurveSpec {
    field: FiniteField,
    a: FqElement,
    b: FqElement,
}

impl CurveSpec {
    pub fn new(field: FiniteField, a: FqElement, b: FqElement) -> Result<Self> {
        check_prime(field.characteristic())?;
        let curve = Self { field, a, b };
        if curve.discriminant().is_zero() {
            return Err(precondition(format!("{curve} is singular")));
        }
        Ok(curve)
    }

    /// Curve with integer coefficients reduced into `F_{p^f}`.
    pub fn from_integers(p: u64, f: u32, a: i64, b: i64) -> Result<Self> {
        let field = FiniteField::new(p, f)?;
        let (a, b) = (field.from_int(a), field.from_int(b));
        Self::new(field, a, b)
    }

    /// The curve `y² = x³ − 27c₄x − 54c₆`.
    pub fn from_c4_c6(field: FiniteField, c4: FqElement, c6: FqElement) -> Result<Self> {
        let a = field.neg(field.mul(field.from_int(27), c4));
        let b = field.neg(field.mul(field.from_int(54), c6));
        Self::new(field, a, b)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn a(&self) -> FqElement {
        self.a
    }

    pub fn b(&self) -> FqElement {
        self.b
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn c4(&self) -> FqElement {
        let k = &self.field;
        k.neg(k.mul(self.a, k.inv(k.from_int(27)).expect("p ≠ 3")))
    }

    pub fn c6(&self) -> FqElement {
        let k = &self.field;
        k.neg(k.mul(self.b, k.inv(k.from_int(54)).expect("p ∉ {2, 3}")))
    }

    /// `4A³ + 27B²`.
    pub fn discriminant(&self) -> FqElement {
        let k = &self.field;
        k.add(k.mul(k.from_int(4), k.pow(self.a, 3)), k.mul(k.from_int(27), k.pow(self.b, 2)))
    }

    /// `x³ + Ax + B`.
    pub fn cubic(&self, x: FqElement) -> FqElement {
        let k = &self.field;
        k.add(k.add(k.pow(x, 3), k.mul(self.a, x)), self.b)
    }

    /// Roots of the cubic in `F_q`, in index order.
    pub fn cubic_roots(&self) -> Vec<FqElement> {
        self.field.elements().filter(|&x| self.cubic(x).is_zero()).collect()
    }

    /// All three affine branch points of `(x, y) ↦ x` are `F_q`-rational.
    pub fn branch_points_rational(&self) -> bool {
        self.cubic_roots().len() == 3
    }

    /// Affine points in order of `(x, y)` indices.
    pub fn affine_points(&self) -> Vec<(FqElement, FqElement)> {
        let roots = square_roots(&self.field);
        self.field
            .elements()
            .flat_map(|x| roots[self.cubic(x).index()].iter().map(move |&y| (x, y)))
            .collect()
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let show = |e: FqElement| {
            let c: Vec<String> = k.coeffs(e).iter().map(|d| d.to_string()).collect();
            if k.degree() == 1 { c[0].clone() } else { format!("({})", c.join(",")) }
        };
        write!(f, "y^2 = x^3 + {}x + {} over F_{}", show(self.a), show(self.b), k.order())
    }
}

/// `roots[v]`: every `y` with `y² = v`, found by squaring each element.
fn square_roots(field: &FiniteField) -> Vec<Vec<FqElement>> {
    let mut roots = vec![Vec::new(); field.order() as usize];
    for y in field.elements() {
        roots[field.mul(y, y).index()].push(y);
    }
    roots
}

/// `N = |Ē(F_q)|`, including the point at infinity.
pub fn count_points_bruteforce(curve: &CurveSpec) -> u64 {
    let field = curve.field();
    let mut solutions = vec![0u64; field.order() as usize];
    for y in field.elements() {
        solutions[field.mul(y, y).index()] += 1;
    }
    let affine = par::sum_range(field.order() as usize, |i| {
        let x = field.element(i as u64).expect("index below q");
        solutions[curve.cubic(x).index()]
    });
    1 + affine
}

/// `N mod (q − 1)`.
pub fn serre_invariant(n: u64, q: u64) -> u64 {
    n % (q - 1)
}

/// `[q + 1 − ⌈2√q⌉, q + 1 + ⌈2√q⌉]`.
pub fn hasse_window(q: u64) -> (u64, u64) {
    let mut w = (4.0 * q as f64).sqrt() as u64;
    while w * w < 4 * q {
        w += 1;
    }
    while w > 0 && (w - 1) * (w - 1) >= 4 * q {
        w -= 1;
    }
    ((q + 1).saturating_sub(w), q + 1 + w)
}

/// An element of `F_{p^f}` from an integer or comma-separated coordinates.
pub fn parse_element(field: &FiniteField, text: &str) -> Result<FqElement> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{text:?}: {e}"))))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [n] => Ok(field.from_int(*n)),
        coords => field.from_coeffs(coords),
    }
}
