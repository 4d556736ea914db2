//! Jet coordinates, total derivatives, prolongation and truncated map jets.

mod flow;
mod frame;
mod jetchart;
mod map;
mod series;

pub use flow::{flow_jet, lie_series_flow};
pub use frame::{frame_action, invariant_residual, FrameAction};
pub use jetchart::{
    check_invariant, determinant, frame_volume_invariant, jet_order, multi_factorial, multi_indices,
    parse_var_name, prolong, total_derivative, total_derivative_multi, var_name, JetChart, MultiIndex,
};
pub use map::{
    displacement_chart, expand_at, jet_compose, jet_invert, jet_pullback_field, jet_pullback_form,
    jet_pushforward_field, transported_field_at_source, FieldJet, FormJet, TruncatedMapJet, TIME,
};
pub use series::{Series, Truncation};
