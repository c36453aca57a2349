//! Bounded synchronization delay: checkers, the expression language, star
//! elimination and synthesis.

mod delay;

pub use delay::{
    ambiguity_witness, is_prefix_code, is_unambiguous, min_sync_delay, prefix_code_violation,
    sync_delay_holds, sync_delay_witness, AmbiguityWitness, DelayWitness,
};

mod sf;

pub use sf::{
    sf_complement, sf_concat, sf_empty, sf_epsilon, sf_intersect, sf_letter, sf_letters, sf_power, sf_union,
    sf_universal, star_eliminate, Sf, SfExpr,
};

mod expr;

pub use expr::{
    parse_sd, sd_empty, sd_inter, sd_letter, sd_product, sd_star, sd_union, sd_union_all, sd_word, to_sf, validate,
    Sd, SdExpr,
};

mod synth;

pub use synth::{
    synthesize, synthesize_language, synthesize_partition, Case, Measure, MeasureStep, Part, PartitionCertificate,
    SynthOptions, Synthesis,
};
