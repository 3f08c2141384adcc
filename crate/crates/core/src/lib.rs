//! Synthesis and simulation toolchain for embroidered programmable logic
//! arrays: truth table to minimized SOP, PLA planes, RTL netlist, fabric
//! layout, DC operating point and seeded fault injection.

pub mod boolcore;
pub mod dcsolve;
pub mod fabric;
pub mod faultmc;
pub mod pipeline;
pub mod plamap;
pub mod rtlnet;
