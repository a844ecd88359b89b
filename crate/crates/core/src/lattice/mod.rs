//! Exact character-lattice algebra on split tori.

pub mod character;
pub mod lemmas;
pub mod snf;
pub mod zero_estimate;

pub use character::{kernel_of, kernel_subgroup, Character, CharacterModule, SubgroupDescriptor};
pub use lemmas::{hilbert_function, product_character_codim, subsets, wi_family_rank, WiFamilyRank};
pub use snf::{smith_normal_form, SmithForm};
pub use zero_estimate::{zero_estimate_search, ZeroEstimateReport, ZeroEstimateWitness};
