//! Explicit Suzuki groups Sz(q) over GF(2^(2m+1)), their element-order
//! statistics, a brute-force oracle for small q, and a gate that checks an
//! (order, nse) profile against Sz(q).

pub mod cli;
pub mod gate;
pub mod gf2m;
pub mod matgrp;
pub mod oracle;
pub mod orderstats;
pub mod suzuki;

