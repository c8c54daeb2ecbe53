pub mod classification;
pub mod quantification;

pub use classification::{
    accuracy, class_scores, f1_pn, macro_recall_pn, mae_macro, mae_macro_cm, mae_micro, mae_micro_cm, ClassScores,
    PrecisionRecall,
};
pub use quantification::{ae, emd, kld, rae, smooth, smoothing_epsilon, SmoothedPair};
