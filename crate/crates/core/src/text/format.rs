use num_traits::{One, Signed, Zero};

use crate::scalar::Cq;

/// Canonical text of an exact coefficient: `3/2`, `-i`, `1/2*i`, `(1+2*i)`.
pub fn format_cq(c: &Cq) -> String {
    if c.im.is_zero() {
        return c.re.to_string();
    }
    if c.re.is_zero() {
        return imag_text(&c.im);
    }
    let im = imag_text(&c.im.abs());
    let sign = if c.im.is_negative() { '-' } else { '+' };
    format!("({}{sign}{im})", c.re)
}

/// Same as [`format_cq`]; every canonical coefficient is already a valid
/// left factor of a product.
pub fn format_cq_factor(c: &Cq) -> String {
    format_cq(c)
}

fn imag_text(im: &num_rational::BigRational) -> String {
    if im.is_one() {
        "i".into()
    } else if *im == -num_rational::BigRational::one() {
        "-i".into()
    } else {
        format!("{im}*i")
    }
}
