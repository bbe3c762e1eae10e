//! Concrete map families, the parameter polytope, and kneading extraction.

mod cubic;
mod exact;
mod itinerary;
mod maps;
mod params;

pub use exact::{rational_from_f64, Rational};
pub use itinerary::{address, default_tol, itinerary, kneading_data_of};
pub use maps::{
    cubic_from_critical_values, make_family_map, sawtooth_from_heights, tent_map, Family, IntervalMap, MapSpec,
    MapVariant,
};
pub use params::{
    anchored_ends, in_polytope, p_from_v, polytope_vertices, v_from_p, CriticalValueVector, ParamVector,
    RealInterval, POLYTOPE_TOL,
};
