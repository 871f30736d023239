use super::MetricsError;
use crate::codec::BBox;
use crate::imaging;

/// Mean of `1 − IoU` over index-aligned box pairs.
pub fn bbox_prioritization_loss(pred: &[BBox], truth: &[BBox]) -> Result<f64, MetricsError> {
    if pred.len() != truth.len() {
        return Err(MetricsError::LengthMismatch { left: pred.len(), right: truth.len() });
    }
    if pred.is_empty() {
        return Err(MetricsError::Empty("box list"));
    }
    let mut total = 0.0;
    for (index, (p, t)) in pred.iter().zip(truth).enumerate() {
        let overlap = imaging::iou(p, t).map_err(|e| MetricsError::InvalidBox { index, reason: e.to_string() })?;
        total += 1.0 - overlap;
    }
    Ok(total / pred.len() as f64)
}

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Mean negative natural-log probability of the labeled class per row.
///
/// A zero probability on a labeled class yields `+inf`; no smoothing is
/// applied.
pub fn qa_cross_entropy(pred_dist: &[Vec<f64>], labels: &[Vec<f64>]) -> Result<f64, MetricsError> {
    if pred_dist.len() != labels.len() {
        return Err(MetricsError::LengthMismatch { left: pred_dist.len(), right: labels.len() });
    }
    if pred_dist.is_empty() {
        return Err(MetricsError::Empty("prediction rows"));
    }
    let mut total = 0.0;
    for (row, (probs, label)) in pred_dist.iter().zip(labels).enumerate() {
        if probs.len() != label.len() {
            return Err(MetricsError::LengthMismatch { left: probs.len(), right: label.len() });
        }
        let sum: f64 = probs.iter().sum();
        if !((sum - 1.0).abs() <= ROW_SUM_TOLERANCE) || probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(MetricsError::InvalidDistribution { row, sum });
        }
        let hot: Vec<usize> = label.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, _)| i).collect();
        if hot.len() != 1 || label[hot[0]] != 1.0 {
            return Err(MetricsError::InvalidLabel { row });
        }
        let p = probs[hot[0]];
        if p == 0.0 {
            log::warn!("row {row}: zero probability on the labeled class, cross-entropy is infinite");
        }
        total -= p.ln();
    }
    Ok(total / pred_dist.len() as f64)
}

/// Fraction of byte positions that differ between equal-length strings.
pub fn char_error_rate(sent: &[u8], received: &[u8]) -> Result<f64, MetricsError> {
    if sent.len() != received.len() {
        return Err(MetricsError::LengthMismatch { left: sent.len(), right: received.len() });
    }
    if sent.is_empty() {
        return Ok(0.0);
    }
    let wrong = sent.iter().zip(received).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / sent.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bbox_loss_cases() {
        let boxes = [BBox::new(0, 0, 2, 2), BBox::new(4, 4, 3, 1)];
        assert_eq!(bbox_prioritization_loss(&boxes, &boxes).unwrap(), 0.0);
        let far = [BBox::new(10, 10, 2, 2), BBox::new(20, 0, 3, 1)];
        assert_eq!(bbox_prioritization_loss(&boxes, &far).unwrap(), 1.0);
        let pred = [BBox::new(0, 0, 2, 2), BBox::new(0, 0, 2, 2)];
        let truth = [BBox::new(0, 0, 2, 2), BBox::new(1, 0, 2, 2)];
        assert!((bbox_prioritization_loss(&pred, &truth).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(bbox_prioritization_loss(&pred[..1], &truth).is_err());
        assert!(bbox_prioritization_loss(&[], &[]).is_err());
        assert!(matches!(
            bbox_prioritization_loss(&[BBox::new(0, 0, 0, 1)], &[BBox::new(0, 0, 1, 1)]),
            Err(MetricsError::InvalidBox { index: 0, .. })
        ));
    }

    #[test]
    fn cross_entropy_cases() {
        let one_hot = vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]];
        assert_eq!(qa_cross_entropy(&one_hot, &one_hot).unwrap(), 0.0);
        let uniform = vec![vec![0.25; 4]; 3];
        let labels = vec![vec![0.0, 0.0, 1.0, 0.0]; 3];
        assert!((qa_cross_entropy(&uniform, &labels).unwrap() - 4f64.ln()).abs() < 1e-15);
        let probs = vec![vec![0.5, 0.5], vec![0.25, 0.75]];
        let labels = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        assert!((qa_cross_entropy(&probs, &labels).unwrap() - 1.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn cross_entropy_edges() {
        let probs = vec![vec![0.0, 1.0]];
        assert_eq!(qa_cross_entropy(&probs, &[vec![1.0, 0.0]]).unwrap(), f64::INFINITY);
        assert!(matches!(
            qa_cross_entropy(&[vec![0.5, 0.6]], &[vec![1.0, 0.0]]),
            Err(MetricsError::InvalidDistribution { row: 0, .. })
        ));
        assert!(matches!(
            qa_cross_entropy(&[vec![0.5, 0.5]], &[vec![1.0, 1.0]]),
            Err(MetricsError::InvalidLabel { row: 0 })
        ));
        assert!(qa_cross_entropy(&[], &[]).is_err());
    }

    #[test]
    fn cer_cases() {
        assert_eq!(char_error_rate(b"reef shark", b"reef shark").unwrap(), 0.0);
        assert_eq!(char_error_rate(b"abc", b"xyz").unwrap(), 1.0);
        assert_eq!(char_error_rate(b"abcd", b"abzd").unwrap(), 0.25);
        assert!(char_error_rate(b"ab", b"abc").is_err());
    }
}
