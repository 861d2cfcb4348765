//! Dimensions of level-one automorphic forms for definite `SO7`, `SO8`,
//! `SO9` and `G2` over `Z`, and the resulting counts of cuspidal selfdual
//! representations of general linear groups.

pub mod arthur;
pub mod basecounts;
pub mod cli;
pub mod cyclo;
pub mod degwcf;
pub mod groupdata;
pub mod pipeline;
pub mod rootsys;
pub mod searches;
