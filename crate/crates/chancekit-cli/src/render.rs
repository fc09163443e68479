//! Human-oriented renderings of the exact payloads. Every string produced
//! here sits next to the exact field it was derived from.

use chancekit::mpoly::BivarPoly;
use chancekit::poly::Poly;
use chancekit::rational::Rational;

pub const DECIMAL_SIG: usize = 12;

pub fn rat(r: &Rational) -> String {
    r.to_string()
}

pub fn dec(r: &Rational) -> String {
    r.to_decimal(DECIMAL_SIG)
}

/// Ascending coefficient strings, the JSON form of a polynomial.
pub fn poly_coeffs(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(Rational::to_string).collect()
}

fn var_power(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// `2/3 n + 2/9` style rendering, highest power first.
pub fn poly_in_var(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for k in (0..=p.deg0()).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vp = var_power(var, k);
        if vp.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&vp);
        } else {
            out.push_str(&format!("{mag} {vp}"));
        }
    }
    out
}

/// `(i, j, c)` triples of a bivariate equation: `i` is the power of `f`,
/// `j` the power of `t`, `c` the exact coefficient.
pub fn bivar_triples(eq: &BivarPoly) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for (i, fc) in eq.fcoeffs().iter().enumerate() {
        for j in 0..=fc.deg0() {
            let c = fc.coeff(j);
            if !c.is_zero() {
                out.push((i, j, c.to_string()));
            }
        }
    }
    out
}

/// `t*f^2 - f + 1` style rendering, highest power of `f` first.
pub fn bivar_equation(eq: &BivarPoly) -> String {
    if eq.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for i in (0..eq.fcoeffs().len()).rev() {
        let fc = eq.coeff_f(i);
        for j in (0..=fc.deg0()).rev() {
            let c = fc.coeff(j);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if !mag.is_one() {
                parts.push(mag.to_string());
            }
            let tp = var_power("t", j);
            if !tp.is_empty() {
                parts.push(tp);
            }
            let fp = var_power("f", i);
            if !fp.is_empty() {
                parts.push(fp);
            }
            if parts.is_empty() {
                parts.push(mag.to_string());
            }
            out.push_str(&parts.join("*"));
        }
    }
    out
}

/// `(p_0(n)) a(n) + (p_1(n)) a(n-1) + ... = 0` with signs pulled out of
/// the parentheses when a coefficient polynomial is globally negated.
pub fn precursive_equation(coeffs: &[Poly]) -> String {
    let mut out = String::new();
    for (i, p) in coeffs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let neg = p.leading_coeff().is_negative();
        let shown = if neg { -p } else { p.clone() };
        if out.is_empty() {
            if neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let arg = if i == 0 { "n".to_string() } else { format!("n-{i}") };
        out.push_str(&format!("({}) a({})", poly_in_var(&shown, "n"), arg));
    }
    out.push_str(" = 0");
    out
}

/// `a(n) = c_1 a(n-1) + c_2 a(n-2) + ...` for a constant-coefficient
/// recurrence.
pub fn cfinite_equation(coeffs: &[Rational]) -> String {
    let mut out = "a(n) =".to_string();
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        out.push_str(if first {
            if neg {
                " -"
            } else {
                " "
            }
        } else if neg {
            " - "
        } else {
            " + "
        });
        first = false;
        if mag.is_one() {
            out.push_str(&format!("a(n-{})", i + 1));
        } else {
            out.push_str(&format!("{mag} a(n-{})", i + 1));
        }
    }
    if first {
        out.push_str(" 0");
    }
    out
}
