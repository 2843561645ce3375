"""
Training Losses
Both losses are averaged over the D samples of a batch and summed over
symbols or bits. Each *_with_grad variant also returns the gradient with
respect to the quantity the network produces.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.special import expit, log_softmax, softmax

logger = logging.getLogger(__name__)


def loss_app(posterior: np.ndarray, labels: np.ndarray) -> float:
    """-(1/D) sum_d sum_k log p(x_k = label) for posterior PDFs (D, K, M)"""
    posterior = np.asarray(posterior, dtype=np.float64)
    picked = np.take_along_axis(posterior, np.asarray(labels)[..., None], axis=-1)[..., 0]
    with np.errstate(divide='ignore'):
        return float(-np.log(picked).sum() / posterior.shape[0])


def loss_app_with_grad(logits: np.ndarray, log_prior: np.ndarray, labels: np.ndarray
                       ) -> Tuple[float, np.ndarray]:
    """L1 on the posterior softmax(logits + log p_A1); gradient w.r.t. logits"""
    scores = logits + log_prior
    d = logits.shape[0]
    log_post = log_softmax(scores, axis=-1)
    onehot = np.zeros_like(scores)
    np.put_along_axis(onehot, np.asarray(labels)[..., None], 1.0, axis=-1)
    loss = float(-(log_post * onehot).sum() / d)
    return loss, (softmax(scores, axis=-1) - onehot) / d


def binary_entropy(llrs: np.ndarray) -> np.ndarray:
    """Entropy in nats of Bernoulli(sigmoid(L))"""
    llrs = np.asarray(llrs, dtype=np.float64)
    return np.logaddexp(0.0, llrs) - expit(llrs) * llrs


def loss_ext(model_llrs: np.ndarray, label_llrs: np.ndarray) -> float:
    """(1/D) sum BCE(sigmoid(L), sigmoid(L~)) written with softplus"""
    model_llrs = np.asarray(model_llrs, dtype=np.float64)
    label_llrs = np.asarray(label_llrs, dtype=np.float64)
    per_bit = np.logaddexp(0.0, model_llrs) - expit(label_llrs) * model_llrs
    return float(per_bit.sum() / model_llrs.shape[0])


def loss_ext_with_grad(model_llrs: np.ndarray, label_llrs: np.ndarray
                       ) -> Tuple[float, np.ndarray]:
    grad = (expit(model_llrs) - expit(label_llrs)) / model_llrs.shape[0]
    return loss_ext(model_llrs, label_llrs), grad
