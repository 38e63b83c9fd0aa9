use serde::Serialize;

use crate::intensity::{compensator_from_past, intensity_from_past, EventSequence, HawkesModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Grid,
    /// `lambda*(t_i)`, the value just before the jump.
    EventLeft,
    /// `lambda*(t_i+)`, the value just after the jump.
    EventRight,
}

impl RowKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowKind::Grid => "grid",
            RowKind::EventLeft => "event_left",
            RowKind::EventRight => "event_right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub kind: RowKind,
    pub intensity: f64,
    pub compensator: f64,
}

/// `(t, lambda*(t), Lambda(t))` on the grid `0, step, 2 step, ... <= horizon`
/// merged with the left and right limits at every arrival.
pub fn intensity_trace(model: &HawkesModel, events: &EventSequence, grid_step: f64) -> Vec<TraceRow> {
    assert!(grid_step > 0.0, "grid step must be positive");
    let times = events.times();
    let horizon = events.horizon();
    let grid_len = (horizon / grid_step + 1e-9).floor() as usize + 1;

    let mut rows = Vec::with_capacity(grid_len + 2 * times.len());
    let mut next_event = 0;
    let mut g = 0;
    loop {
        let grid_t = g as f64 * grid_step;
        let take_grid = g < grid_len && (next_event >= times.len() || grid_t < times[next_event]);
        if take_grid {
            let past = &times[..events.count_before(grid_t)];
            rows.push(TraceRow {
                t: grid_t,
                kind: RowKind::Grid,
                intensity: intensity_from_past(model, past, grid_t),
                compensator: compensator_from_past(model, past, grid_t),
            });
            g += 1;
        } else if next_event < times.len() {
            let t = times[next_event];
            let before = &times[..next_event];
            let compensator = compensator_from_past(model, before, t);
            rows.push(TraceRow {
                t,
                kind: RowKind::EventLeft,
                intensity: intensity_from_past(model, before, t),
                compensator,
            });
            rows.push(TraceRow {
                t,
                kind: RowKind::EventRight,
                intensity: intensity_from_past(model, &times[..=next_event], t),
                compensator,
            });
            next_event += 1;
        } else {
            break;
        }
    }
    rows
}
