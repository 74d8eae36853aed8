//! Maps of the disk behind one interface, and a by-name registry that builds
//! them from command-line style specs such as `ft:t=0.5` or `ftr:t=0.5,r=0.9`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{ft_eval, ft_r_eval, goodman_g, picard_map, qt, qt_prime, robertson_eval, slit_rep_eval};
use crate::measures::{CircleMeasure, SegmentMeasure};
use crate::region::{param, parse_spec};
use crate::series::DEFAULT_ORDER;
use crate::shear::{shear, HarmonicMap, MAX_EVAL_MODULUS};

/// A map `f = h + conj(g)` of (part of) the unit disk into the plane.
pub trait PlaneMap: Send + Sync {
    fn name(&self) -> String;

    fn eval(&self, z: Complex64) -> Result<Complex64>;

    /// `(h'(z), g'(z))`; analytic maps report `g' = 0`.
    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    fn is_analytic(&self) -> bool {
        false
    }

    /// Largest `|z|` at which evaluation is trusted.
    fn max_modulus(&self) -> f64 {
        1.0
    }

    /// `|h'|² - |g'|²`
    fn jacobian(&self, z: Complex64) -> Result<f64> {
        let (hp, gp) = self.derivatives(z)?;
        Ok(hp.norm_sqr() - gp.norm_sqr())
    }
}

type AnalyticFn = dyn Fn(Complex64) -> Result<(Complex64, Complex64)> + Send + Sync;

/// Analytic map given by a closure returning `(f(z), f'(z))`.
#[derive(Clone)]
pub struct AnalyticMap {
    label: String,
    f: Arc<AnalyticFn>,
}

impl AnalyticMap {
    pub fn new(label: impl Into<String>, f: impl Fn(Complex64) -> Result<(Complex64, Complex64)> + Send + Sync + 'static) -> Self {
        Self { label: label.into(), f: Arc::new(f) }
    }

    /// Robertson sum of ν, a typically real analytic function.
    pub fn robertson(nu: SegmentMeasure) -> Self {
        Self::new(format!("robertson[{} atoms]", nu.atoms().len()), move |z| robertson_eval(&nu, z))
    }

    /// Slit-plane representation `Σ w ζ/(1 - tζ)` of ν on the unit disk.
    pub fn slit_rep(nu: SegmentMeasure) -> Self {
        Self::new(format!("slit[{} atoms]", nu.atoms().len()), move |z| slit_rep_eval(&nu, z))
    }

    pub fn value_and_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        (self.f)(z)
    }
}

impl fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticMap").field("label", &self.label).finish()
    }
}

impl PlaneMap for AnalyticMap {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.f)(z)?.0)
    }

    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok(((self.f)(z)?.1, Complex64::new(0.0, 0.0)))
    }

    fn is_analytic(&self) -> bool {
        true
    }
}

impl PlaneMap for HarmonicMap {
    fn name(&self) -> String {
        format!("sheared[{} mu atoms, {} nu atoms]", self.mu().atoms().len(), self.nu().atoms().len())
    }

    fn eval(&self, z: Complex64) -> Result<Complex64> {
        HarmonicMap::eval(self, z)
    }

    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        HarmonicMap::derivatives(self, z)
    }

    fn max_modulus(&self) -> f64 {
        MAX_EVAL_MODULUS
    }

    fn jacobian(&self, z: Complex64) -> Result<f64> {
        HarmonicMap::jacobian(self, z)
    }
}

impl<M: PlaneMap + ?Sized> PlaneMap for Arc<M> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        (**self).derivatives(z)
    }
    fn is_analytic(&self) -> bool {
        (**self).is_analytic()
    }
    fn max_modulus(&self) -> f64 {
        (**self).max_modulus()
    }
    fn jacobian(&self, z: Complex64) -> Result<f64> {
        (**self).jacobian(z)
    }
}

/// Builds a map from the `key=value` parameters of its spec.
pub type MapFactory = Box<dyn Fn(&[(String, f64)]) -> Result<Arc<dyn PlaneMap>> + Send + Sync>;

struct Entry {
    help: &'static str,
    factory: MapFactory,
}

/// Named map constructors, selected at runtime by spec string.
pub struct MapRegistry {
    entries: BTreeMap<String, Entry>,
}

fn required(params: &[(String, f64)], key: &str, name: &str) -> Result<f64> {
    param(params, key).ok_or_else(|| Error::InvalidInput(format!("map '{name}' needs {key}=")))
}

impl MapRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn register(
        &mut self,
        name: &str,
        help: &'static str,
        factory: impl Fn(&[(String, f64)]) -> Result<Arc<dyn PlaneMap>> + Send + Sync + 'static,
    ) {
        self.entries.insert(name.to_ascii_lowercase(), Entry { help, factory: Box::new(factory) });
    }

    pub fn names(&self) -> impl Iterator<Item = (&str, &'static str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.help))
    }

    /// Parses `name[:key=value,...]` and runs the registered factory.
    pub fn build(&self, spec: &str) -> Result<Arc<dyn PlaneMap>> {
        let (name, params) = parse_spec(spec)?;
        let entry = self
            .entries
            .get(&name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown map '{name}'")))?;
        (entry.factory)(&params)
    }
}

impl Default for MapRegistry {
    /// The built-in maps: `identity`, `square`, `koebe`, `qt`, `ft`, `ftr`,
    /// `goodman`, `picard`, `extreme` and `theorem5`.
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("identity", "f(z) = z", |_| {
            Ok(Arc::new(AnalyticMap::new("identity", |z| Ok((z, Complex64::new(1.0, 0.0))))))
        });
        r.register("square", "f(z) = z^2 (not typically real)", |_| {
            Ok(Arc::new(AnalyticMap::new("square", |z| Ok((z * z, z * 2.0)))))
        });
        r.register("koebe", "Koebe function z/(1-z)^2 = q_1", |_| {
            Ok(Arc::new(AnalyticMap::new("koebe", |z| Ok((qt(1.0, z)?, qt_prime(1.0, z)?)))))
        });
        r.register("qt", "q_t(z) = z/(1-2tz+z^2); qt:t=<[-1,1]>", |p| {
            let t = required(p, "t", "qt")?;
            if !(-1.0..=1.0).contains(&t) {
                return Err(Error::InvalidInput(format!("qt needs t in [-1, 1], got {t}")));
            }
            Ok(Arc::new(AnalyticMap::new(format!("qt:t={t}"), move |z| Ok((qt(t, z)?, qt_prime(t, z)?)))))
        });
        r.register("ft", "f_t = t q_1 + (1-t) q_-1; ft:t=<[0,1]>", |p| {
            let t = required(p, "t", "ft")?;
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidInput(format!("ft needs t in [0, 1], got {t}")));
            }
            Ok(Arc::new(AnalyticMap::new(format!("ft:t={t}"), move |z| ft_eval(t, z))))
        });
        r.register("ftr", "f_(t,R)(z) = f_t(Rz)/R; ftr:t=..,r=<(sqrt2-1,1]>", |p| {
            let t = required(p, "t", "ftr")?;
            let radius = required(p, "r", "ftr")?;
            if !(0.0..=1.0).contains(&t) || !(radius > SQRT_2 - 1.0 && radius <= 1.0) {
                return Err(Error::InvalidInput(format!("ftr needs t in [0,1] and R in (sqrt2-1, 1], got {t}, {radius}")));
            }
            Ok(Arc::new(AnalyticMap::new(format!("ftr:t={t},r={radius}"), move |z| ft_r_eval(t, radius, z))))
        });
        r.register("goodman", "G(z) = tan(pi z/(1+z^2))/pi", |_| Ok(Arc::new(AnalyticMap::new("goodman", goodman_g))));
        r.register("picard", "u(z) e^{-u(z)}, u = 4z/(1+z)^2", |_| Ok(Arc::new(AnalyticMap::new("picard", picard_map))));
        r.register("extreme", "sheared extreme point k(., p_eta, q_t); extreme:t=..,theta=..", |p| {
            let t = required(p, "t", "extreme")?;
            let theta = param(p, "theta").unwrap_or(0.0);
            let nu = SegmentMeasure::dirac(t).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let mu = CircleMeasure::dirac(theta).map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(Arc::new(shear(&mu, &nu, DEFAULT_ORDER)?))
        });
        r.register("theorem5", "shear of f_1/2 with p = (1+z)/(1-z), not univalent on the lens", |_| {
            Ok(Arc::new(crate::search::theorem5_map()?.0))
        });
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_named_maps() {
        let reg = MapRegistry::default();
        let z = Complex64::new(0.5, 0.0);
        assert!((reg.build("koebe").unwrap().eval(z).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let ft = reg.build("ft:t=0.5").unwrap();
        let a = Complex64::new(0.0, SQRT_2 - 1.0);
        assert!((ft.eval(a).unwrap() - Complex64::new(0.0, 0.25)).norm() < 1e-15);
        assert!(ft.jacobian(a).unwrap() < 1e-26);
        assert!(reg.build("qt:t=0.3").unwrap().is_analytic());
        assert!(!reg.build("theorem5").unwrap().is_analytic());
        assert_eq!(reg.build("theorem5").unwrap().max_modulus(), MAX_EVAL_MODULUS);
        assert!(reg.build("ft:t=2").is_err());
        assert!(reg.build("ft").is_err());
        assert!(reg.build("nosuch").is_err());
        assert!(reg.names().any(|(n, _)| n == "goodman"));
    }

    #[test]
    fn custom_strategies_can_be_registered() {
        let mut reg = MapRegistry::empty();
        reg.register("double", "2z", |_| Ok(Arc::new(AnalyticMap::new("double", |z| Ok((z * 2.0, Complex64::new(2.0, 0.0)))))));
        let m = reg.build("double").unwrap();
        assert_eq!(m.eval(Complex64::new(1.0, 1.0)).unwrap(), Complex64::new(2.0, 2.0));
    }
}
