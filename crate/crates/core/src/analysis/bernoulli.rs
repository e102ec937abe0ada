use crate::error::Result;
use crate::geometry::GnpDomain;
use crate::levelsets::ray_level;
use crate::solver::ScalarField;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BernoulliSample {
    pub index: usize,
    pub grad_u: f64,
    pub grad_v: f64,
    /// `g_t = |∇u| |∇v|`.
    pub g: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BernoulliData {
    pub t: f64,
    pub samples: Vec<BernoulliSample>,
    /// `max g_t / min g_t`.
    pub spread: f64,
}

/// `|∇u|`, `|∇v|` and their product at `c + d_t(c) ν(c)` on every core ray,
/// with `d_t` the thickness of the level `t` of `u`.
pub fn bernoulli_slice_data(u: &ScalarField, v: &ScalarField, domain: &GnpDomain, t: f64) -> Result<BernoulliData> {
    let (gu, gv) = (u.gradient(), v.gradient());
    let samples = domain
        .core()
        .samples()
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let d = ray_level(u, domain, index, t)?;
            let x = s.point + s.normal * d;
            let (grad_u, grad_v) = (gu.magnitude(x), gv.magnitude(x));
            Ok(BernoulliSample {
                index,
                grad_u,
                grad_v,
                g: grad_u * grad_v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = samples.iter().map(|s| s.g).fold(0.0, f64::max);
    let min = samples.iter().map(|s| s.g).fold(f64::INFINITY, f64::min);
    Ok(BernoulliData {
        t,
        samples,
        spread: if min > 0.0 { max / min } else { f64::INFINITY },
    })
}
