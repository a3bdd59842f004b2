use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(HashMap::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let forward = direction == FftDirection::Forward;
    PLANS.with(|cell| {
        cell.borrow_mut()
            .entry((len, forward))
            .or_insert_with(|| FftPlanner::new().plan_fft(len, direction))
            .clone()
    })
}

/// Unnormalized in-place DFT over every axis of a row-major `points^dim` block.
pub(crate) fn fft_nd(data: &mut [Complex64], dim: usize, points: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), points.pow(dim as u32));
    let fft = plan(points, direction);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // last axis: contiguous lanes
    fft.process_with_scratch(data, &mut scratch);
    if dim == 1 {
        return;
    }

    let mut lane = vec![Complex64::default(); points];
    for axis in 0..dim - 1 {
        let stride = points.pow((dim - 1 - axis) as u32);
        let block = stride * points;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, slot) in lane.iter_mut().enumerate() {
                    *slot = data[start + i * stride];
                }
                fft.process_with_scratch(&mut lane, &mut scratch);
                for (i, v) in lane.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }
}
