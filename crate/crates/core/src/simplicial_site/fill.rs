use super::{Site, Variant};
use crate::error::{Error, Result};
use crate::power_series::{Monomial, PDSeries, SpecRef, VarSpec};

/// Exact quotient of `r` by `T_0 ⋯ T_l` in the level-`l` `π`-carrier.
///
/// At `l = 0` this is division by `π`, which costs one digit of precision; the
/// quotient is returned through its canonical lift to full precision. For
/// `l >= 1` it is a coordinate division by `T_1 ⋯ T_l` followed by synthetic
/// division by `T_0 = π - ΣT` in the variable `T_l`, both exact.
///
/// Over a carrier filtered by `(p, T)^k` the quotient is only defined modulo
/// `(p, T)^(k-l-1)`; it is computed there and returned as a lift.
pub fn divide_by_vertex_product(r: &PDSeries, l: usize) -> Result<PDSeries> {
    let outer = r.spec().clone();
    if outer.n_t() != l {
        return Err(Error::VarSpecMismatch);
    }
    if l == 0 {
        return Ok(r.divide_exact(outer.ring().p())?.lift_to_full());
    }
    let spec = match outer.filtration() {
        Some(k) if k as usize > l => outer.filtered(k - l as u32)?,
        Some(_) => return Ok(PDSeries::zero(&outer)),
        None => outer.clone(),
    };
    let mut s = PDSeries::zero(&spec).at_precision(r.precision());
    for (m, c) in r.terms() {
        if m.t.iter().any(|&k| k == 0) {
            return Err(Error::NotDivisible { monomial: spec.format_monomial(m) });
        }
        let t = m.t.iter().map(|k| k - 1).collect();
        s.add_term(Monomial { x: m.x.clone(), t }, c);
    }
    let last = l - 1;
    let mut c = PDSeries::constant(&spec, spec.ring().p());
    for j in 0..last {
        c = &c - &PDSeries::t(&spec, j);
    }
    let t_last = PDSeries::t(&spec, last);
    let lin = &c - &t_last;
    let mut q = PDSeries::zero(&spec).at_precision(r.precision());
    loop {
        let e = s.terms().map(|(m, _)| m.t[last]).max().unwrap_or(0);
        if e == 0 {
            break;
        }
        let mut h = PDSeries::zero(&spec).at_precision(s.precision());
        for (m, c) in s.terms() {
            if m.t[last] == e {
                let mut m2 = m.clone();
                m2.t[last] -= 1;
                h.add_term(m2, c);
            }
        }
        s = &s + &(&lin * &h);
        q = &q - &h;
    }
    if let Some((m, _)) = s.terms().next() {
        return Err(Error::NotDivisible { monomial: spec.format_monomial(m) });
    }
    Ok(if outer.filtration().is_some() { q.respec(&outer) } else { q })
}

/// Pads the `T`-exponents of `f` with zeros to live in `to`.
fn include(f: &PDSeries, to: &SpecRef) -> PDSeries {
    let mut out = PDSeries::zero(to);
    for (m, c) in f.terms() {
        let mut t = m.t.clone();
        t.resize(to.n_t(), 0);
        out.add_term(Monomial { x: m.x.clone(), t }, c);
    }
    out.at_precision(f.precision())
}

fn check_faces(site: &Site, m: usize, faces: &[PDSeries], base: &PDSeries) -> Result<()> {
    if m == 0 || faces.len() != m + 1 {
        return Err(Error::IncompatibleFaces(format!("a {m}-simplex needs {} faces, got {}", m + 1, faces.len())));
    }
    let lower = site.level(m - 1, Variant::Pi);
    for (i, f) in faces.iter().enumerate() {
        if !VarSpec::compatible(f.spec(), lower) {
            return Err(Error::IncompatibleFaces(format!("face {i} does not live at level {}", m - 1)));
        }
        let red = site.augmentation(f, Variant::Pi);
        if red.geometric_terms() != base.reduce_mod_p().geometric_terms() {
            return Err(Error::IncompatibleFaces(format!("face {i} reduces to {red}, base is {base}")));
        }
    }
    if m >= 2 {
        for j in 0..=m {
            for i in 0..j {
                let a = site.apply_face(m - 1, i, Variant::Pi, &faces[j]);
                let b = site.apply_face(m - 1, j - 1, Variant::Pi, &faces[i]);
                if a != b {
                    return Err(Error::IncompatibleFaces(format!("d{i} f{j} = {a} but d{} f{i} = {b}", j - 1)));
                }
            }
        }
    }
    Ok(())
}

/// Fills the horn given by faces `f_0 .. f_(k-1)` (any `k <= m`):
/// `w <- w - s_i(∂_i w - f_i)` for `i = 0..k`, starting from `w = 0`.
pub fn fill_horn(site: &Site, m: usize, faces: &[PDSeries]) -> PDSeries {
    let spec = site.level(m, Variant::Pi);
    let mut w = PDSeries::zero(spec);
    for (i, f) in faces.iter().enumerate() {
        let di = site.apply_face(m, i, Variant::Pi, &w);
        let err = &di - f;
        if !err.is_zero() {
            w = &w - &site.apply_degeneracy(m - 1, i, Variant::Pi, &err);
        }
    }
    w
}

/// An element of `RΔ^π_m` (over the site's geometric block) with the given
/// faces and reduction.
///
/// The horn on faces `0..m-1` is filled first; the remaining error on the last
/// face has vanishing faces, hence is `T_0 ⋯ T_(m-1) q` one level down, and
/// `T_0 ⋯ T_(m-1) q` read at level `m` has that last face and no others.
pub fn fill_boundary(site: &Site, m: usize, faces: &[PDSeries], base: &PDSeries) -> Result<PDSeries> {
    check_faces(site, m, faces, base)?;
    let spec = site.level(m, Variant::Pi);
    let w = fill_horn(site, m, &faces[..m]);
    let r = &faces[m] - &site.apply_face(m, m, Variant::Pi, &w);
    let q = divide_by_vertex_product(&r, m - 1).map_err(|e| {
        Error::PrecisionExhausted(format!("last-face error is not divisible by the vertex product: {e}"))
    })?;
    let mut z = include(&q, spec);
    for i in 0..m {
        z = &z * &site.vertex(m, i, Variant::Pi);
    }
    let f = &w + &z;
    for (i, face) in faces.iter().enumerate() {
        if &site.apply_face(m, i, Variant::Pi, &f) != face {
            return Err(Error::PrecisionExhausted(format!("face {i} of the filler leaves the weight window")));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_linalg::Zpn;

    fn site() -> Site {
        Site::new(Zpn::new(3, 3).unwrap(), 6).unwrap()
    }

    #[test]
    fn zero_boundary_gives_zero() {
        let s = site();
        let l1 = s.level(1, Variant::Pi);
        let base = PDSeries::zero(s.level(0, Variant::Pi));
        let f = fill_boundary(&s, 2, &[PDSeries::zero(l1), PDSeries::zero(l1), PDSeries::zero(l1)], &base).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn one_simplex_from_zero_and_pi() {
        let s = site();
        let l0 = s.level(0, Variant::Pi);
        let faces = [PDSeries::zero(l0), PDSeries::constant(l0, 3)];
        let f = fill_boundary(&s, 1, &faces, &PDSeries::zero(l0)).unwrap();
        assert_eq!(f, s.vertex(1, 0, Variant::Pi));
        assert_eq!(s.apply_face(1, 0, Variant::Pi, &f), faces[0]);
        assert_eq!(s.apply_face(1, 1, Variant::Pi, &f), faces[1]);
    }

    #[test]
    fn division_by_vertex_product() {
        let s = site();
        let g = &PDSeries::t(s.level(2, Variant::Pi), 0) + &PDSeries::constant(s.level(2, Variant::Pi), 5);
        let prod = &s.vertex_product(2, Variant::Pi) * &g;
        assert_eq!(divide_by_vertex_product(&prod, 2).unwrap(), g);
        assert!(divide_by_vertex_product(&g, 2).is_err());
    }

    #[test]
    fn incompatible_faces_are_rejected() {
        let s = site();
        let l1 = s.level(1, Variant::Pi);
        let base = PDSeries::zero(s.level(0, Variant::Pi));
        let t = PDSeries::t(l1, 0);
        let faces = [t.clone(), PDSeries::zero(l1), PDSeries::zero(l1)];
        assert!(matches!(fill_boundary(&s, 2, &faces, &base), Err(Error::IncompatibleFaces(_))));
    }
}
