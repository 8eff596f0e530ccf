//! Mean-field quantum phase transitions of polaritons in arrays of
//! impurity-doped microcavities.
//!
//! * [`model`], [`meanfield`]: site Hamiltonian, Mott lobes, phase diagrams
//!   and critical tunneling;
//! * [`observables`]: interaction energy, photon fraction, loss and the
//!   cavity Q needed to see the transition;
//! * [`disorder`]: site-to-site disorder and lobe survival;
//! * [`kerr`]: Bose-Hubbard parameters from mode profiles in the dispersive
//!   limit;
//! * [`config`], [`cli`]: the `polariton` command-line tool.

pub mod band;
pub mod cli;
pub mod config;
pub mod disorder;
pub mod eigen;
pub mod kerr;
pub mod meanfield;
pub mod model;
pub mod observables;
pub mod optimize;
pub mod params;
