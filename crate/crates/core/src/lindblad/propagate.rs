use serde::Serialize;

use super::superop::{unvec, vec};
use super::{build_liouvillian, LindbladModel, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};
use crate::spinops::HermitianOperator;

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    #[serde(skip)]
    pub state: HermitianOperator,
}

fn check_span(duration: f64, steps: usize) -> Result<()> {
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidArgument(format!("duration must be non-negative, got {duration}")));
    }
    if steps == 0 && duration > 0.0 {
        return Err(Error::InvalidArgument("at least one step is needed for a positive duration".into()));
    }
    Ok(())
}

/// Evolves `rho` for `duration` in `steps` equal slices, controls sampled at slice midpoints.
pub fn propagate(rho: &HermitianOperator, model: &LindbladModel, duration: f64, steps: usize) -> Result<HermitianOperator> {
    propagate_from(rho, model, 0.0, duration, steps)
}

pub fn propagate_from(
    rho: &HermitianOperator,
    model: &LindbladModel,
    t0: f64,
    duration: f64,
    steps: usize,
) -> Result<HermitianOperator> {
    Ok(trajectory(rho, model, t0, duration, steps)?.pop().expect("trajectory starts with the initial state").state)
}

/// States at `t0` and after every slice.
pub fn trajectory(
    rho: &HermitianOperator,
    model: &LindbladModel,
    t0: f64,
    duration: f64,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    check_span(duration, steps)?;
    if rho.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: rho.dim() });
    }
    let dim = rho.dim();
    let mut out = vec![TrajectoryPoint { t: t0, state: rho.clone() }];
    if duration == 0.0 {
        return Ok(out);
    }
    let dt = duration / steps as f64;
    let fixed = model.is_time_independent().then(|| build_liouvillian(model, t0).exp(dt));
    let mut v = vec(rho.matrix());
    for k in 0..steps {
        let step = match &fixed {
            Some(s) => s.matrix.clone(),
            None => build_liouvillian(model, t0 + (k as f64 + 0.5) * dt).exp(dt).matrix,
        };
        v = step * v;
        out.push(TrajectoryPoint { t: t0 + (k + 1) as f64 * dt, state: HermitianOperator::from_matrix_unchecked(unvec(&v, dim)) });
    }
    Ok(out)
}

/// Product of slice propagators over `[t0, t0 + duration]`.
pub fn slice_propagator(model: &LindbladModel, t0: f64, duration: f64, steps: usize) -> Result<Superoperator> {
    check_span(duration, steps)?;
    let dim = model.dim();
    if duration == 0.0 {
        return Ok(Superoperator::identity(dim));
    }
    let dt = duration / steps as f64;
    if model.is_time_independent() {
        return Ok(build_liouvillian(model, t0).exp(dt).pow(steps));
    }
    let mut total = Superoperator::identity(dim);
    for k in 0..steps {
        total = build_liouvillian(model, t0 + (k as f64 + 0.5) * dt).exp(dt).after(&total);
    }
    Ok(total)
}

/// Propagation under periodic controls, reusing one-period propagator. Records the state once per period.
pub fn propagate_periodic(
    rho: &HermitianOperator,
    model: &LindbladModel,
    duration: f64,
    slices_per_period: usize,
) -> Result<(HermitianOperator, Vec<TrajectoryPoint>)> {
    check_span(duration, slices_per_period.max(1))?;
    let Some(period) = model.period() else {
        let steps = slices_per_period.max(1);
        let traj = trajectory(rho, model, 0.0, duration, steps)?;
        let last = traj.last().expect("nonempty").state.clone();
        return Ok((last, traj));
    };
    let one = slice_propagator(model, 0.0, period, slices_per_period.max(1))?;
    let cycles = (duration / period).floor() as usize;
    let dim = rho.dim();
    let mut v = vec(rho.matrix());
    let mut traj = vec![TrajectoryPoint { t: 0.0, state: rho.clone() }];
    for k in 0..cycles {
        v = &one.matrix * v;
        traj.push(TrajectoryPoint {
            t: (k + 1) as f64 * period,
            state: HermitianOperator::from_matrix_unchecked(unvec(&v, dim)),
        });
    }
    let rest = duration - cycles as f64 * period;
    let mut state = HermitianOperator::from_matrix_unchecked(unvec(&v, dim));
    if rest > 1e-15 * period {
        let dt = period / slices_per_period.max(1) as f64;
        let steps = (rest / dt).ceil().max(1.0) as usize;
        state = propagate_from(&state, model, cycles as f64 * period, rest, steps)?;
        traj.push(TrajectoryPoint { t: duration, state: state.clone() });
    }
    Ok((state, traj))
}

/// `V` conjugation followed by free evolution for `tau` with controls off.
pub fn periodic_map(v: &CMat, tau: f64, model: &LindbladModel) -> Result<Superoperator> {
    linalg::check_unitary(v, UNITARY_TOL)?;
    if v.nrows() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: v.nrows() });
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be non-negative, got {tau}")));
    }
    let conj = Superoperator::conjugation(v);
    if tau == 0.0 {
        return Ok(conj);
    }
    Ok(build_liouvillian(&model.without_controls(), 0.0).exp(tau).after(&conj))
}

/// Unit-trace fixed point from the null space of `M − I`.
pub fn fixed_point(map: &Superoperator) -> Result<HermitianOperator> {
    let d2 = map.matrix.nrows();
    let dim = map.dim();
    let shifted = &map.matrix - linalg::identity(d2);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let tol = 1e-9 * svd.singular_values.max().max(1.0);
    let null: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= tol).collect();
    match null.len() {
        0 => return Err(Error::NonUniqueFixedPoint(0)),
        1 => {}
        m => return Err(Error::NonUniqueFixedPoint(m)),
    }
    let row = v_t.row(null[0]).adjoint();
    let x = unvec(&row, dim);
    let tr = linalg::trace(&x);
    if tr.norm() < 1e-12 {
        return Err(Error::InvalidArgument("fixed point is traceless; map is not trace preserving".into()));
    }
    let x = x * c(1.0) / tr;
    Ok(HermitianOperator::from_matrix_unchecked(x))
}
