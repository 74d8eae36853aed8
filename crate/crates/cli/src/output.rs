use std::fmt::Write as _;

use num_complex::Complex64;

/// Fixed view of the image plane, `[-2, 2]²`.
const VIEW: f64 = 2.0;

/// Rows `z_re,z_im,f_re,f_im` with 17 significant digits.
pub fn csv(rows: &[(Complex64, Complex64)]) -> String {
    let mut out = String::from("z_re,z_im,f_re,f_im\n");
    for (z, w) in rows {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", z.re, z.im, w.re, w.im);
    }
    out
}

fn clamp(v: f64) -> f64 {
    v.clamp(-1e6, 1e6)
}

/// Boundary image as a closed polyline and grid images as dots. The image
/// plane is flipped so that `Im w` points up.
pub fn svg(boundary: &[Complex64], cloud: &[Complex64], title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        -VIEW,
        -VIEW,
        2.0 * VIEW,
        2.0 * VIEW
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r##"<line x1="{0}" y1="0" x2="{1}" y2="0" stroke="#bbb" stroke-width="0.004"/><line x1="0" y1="{0}" x2="0" y2="{1}" stroke="#bbb" stroke-width="0.004"/>"##,
        -VIEW, VIEW
    );
    out.push_str(r##"<g fill="#4a7ab5">"##);
    for w in cloud.iter().filter(|w| w.re.abs() <= VIEW && w.im.abs() <= VIEW) {
        let _ = write!(out, r#"<circle cx="{:.6}" cy="{:.6}" r="0.006"/>"#, w.re, -w.im);
    }
    out.push_str("</g>\n");
    out.push_str(r##"<polygon fill="none" stroke="#c0392b" stroke-width="0.006" points=""##);
    for (k, w) in boundary.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.6},{:.6}", clamp(w.re), clamp(-w.im));
    }
    out.push_str("\"/>\n</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("'{p}' is not a number"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re[,im], got '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_seventeen_digits() {
        let s = csv(&[(Complex64::new(0.1, 0.0), Complex64::new(1.0 / 3.0, -2.0))]);
        let row = s.lines().nth(1).unwrap();
        assert_eq!(row, "1.0000000000000001e-1,0.0000000000000000e0,3.3333333333333331e-1,-2.0000000000000000e0");
        let back: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn svg_uses_fixed_view() {
        let s = svg(&[Complex64::new(1.0, 1.0), Complex64::new(-1.0, 0.5)], &[Complex64::new(0.0, 3.0)], "a<b");
        assert!(s.contains(r#"viewBox="-2 -2 4 4""#));
        assert!(s.contains("1.000000,-1.000000 -1.000000,-0.500000"));
        assert!(s.contains("a&lt;b"));
        assert!(!s.contains("<circle"));
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("0.1").unwrap(), Complex64::new(0.1, 0.0));
        assert_eq!(parse_complex("-1, 2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_complex("a,b").is_err());
    }
}
