"""The four baseline model families, sized exactly as published.

- logistic: a single linear layer on the flattened window, zero-
  initialized and trained by full-batch gradient descent — the same
  recipe as the toolkit's built-in learner, so the two implementations
  must land on the same optimum for the cross-component parity check.
- cnn: one 1-D convolution layer (32 filters), a dense hidden layer of
  32 units, and an output dense layer.
- lstm: one LSTM layer and an output dense layer; the input is the
  fixed-length window of previous rounds.
- transformer: 4 encoder blocks, each a 4-head attention layer with 25%
  dropout and a constricted feed-forward of two 1-D convolutions with 4
  hidden units and 25% dropout, normalization applied after both
  sublayers; then global average pooling, a dense layer of 128 units,
  40% dropout, and an output dense layer.

Every family consumes the same input shape ``(batch, k+1, W)`` produced
by :meth:`vren_baselines.data.FeatureFile.sequences`, and emits one
logit for the binary rally-winner task or nine class logits for the
set-type / hit-type tasks.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

FAMILIES = ("logistic", "cnn", "lstm", "transformer")

# Output dimensions per task: rally winner is one win logit; set-type
# and hit-type each label rounds with one of nine classes.
TASK_OUTPUTS = {"rally_winner": 1, "set_type": 9, "hit_type": 9}


@dataclass(frozen=True)
class ArchSpec:
    """A family name plus its fixed published hyperparameters."""

    family: str
    # cnn
    conv_filters: int = 32
    conv_kernel: int = 3
    cnn_hidden: int = 32
    # lstm
    lstm_hidden: int = 64
    # transformer
    d_model: int = 64
    n_blocks: int = 4
    n_heads: int = 4
    attn_dropout: float = 0.25
    ff_hidden: int = 4
    ff_dropout: float = 0.25
    head_hidden: int = 128
    head_dropout: float = 0.40

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.d_model % self.n_heads != 0:
            raise ValueError(f"d_model {self.d_model} not divisible by {self.n_heads} heads")


class LogisticModel(nn.Module):
    """Linear map from the flattened window to output logits.

    Runs in float64 with zero-initialized parameters so full-batch
    gradient descent retraces the toolkit learner's exact trajectory.
    """

    def __init__(self, seq_len: int, width: int, n_outputs: int):
        super().__init__()
        self.linear = nn.Linear(seq_len * width, n_outputs, dtype=torch.float64)
        nn.init.zeros_(self.linear.weight)
        nn.init.zeros_(self.linear.bias)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.linear(x.flatten(1))


class CnnModel(nn.Module):
    def __init__(self, spec: ArchSpec, seq_len: int, width: int, n_outputs: int):
        super().__init__()
        if seq_len < spec.conv_kernel:
            raise ValueError(
                f"window length {seq_len} shorter than the {spec.conv_kernel}-wide convolution"
            )
        self.conv = nn.Conv1d(width, spec.conv_filters, spec.conv_kernel)
        conv_len = seq_len - spec.conv_kernel + 1
        self.hidden = nn.Linear(spec.conv_filters * conv_len, spec.cnn_hidden)
        self.out = nn.Linear(spec.cnn_hidden, n_outputs)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = torch.relu(self.conv(x.transpose(1, 2)))
        h = torch.relu(self.hidden(h.flatten(1)))
        return self.out(h)


class LstmModel(nn.Module):
    def __init__(self, spec: ArchSpec, width: int, n_outputs: int):
        super().__init__()
        self.lstm = nn.LSTM(width, spec.lstm_hidden, batch_first=True)
        self.out = nn.Linear(spec.lstm_hidden, n_outputs)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        hidden, _ = self.lstm(x)
        return self.out(hidden[:, -1])


class EncoderBlock(nn.Module):
    """One post-norm encoder block: attention, then a narrow conv feed-forward."""

    def __init__(self, spec: ArchSpec):
        super().__init__()
        self.attn = nn.MultiheadAttention(
            spec.d_model, spec.n_heads, dropout=spec.attn_dropout, batch_first=True
        )
        self.norm1 = nn.LayerNorm(spec.d_model)
        self.ff_in = nn.Conv1d(spec.d_model, spec.ff_hidden, kernel_size=1)
        self.ff_drop = nn.Dropout(spec.ff_dropout)
        self.ff_out = nn.Conv1d(spec.ff_hidden, spec.d_model, kernel_size=1)
        self.norm2 = nn.LayerNorm(spec.d_model)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        attended, _ = self.attn(x, x, x, need_weights=False)
        x = self.norm1(x + attended)
        f = self.ff_drop(torch.relu(self.ff_in(x.transpose(1, 2))))
        f = self.ff_out(f).transpose(1, 2)
        return self.norm2(x + f)


class TransformerModel(nn.Module):
    def __init__(self, spec: ArchSpec, width: int, n_outputs: int):
        super().__init__()
        # The attention stack needs a head-divisible channel count, so
        # rounds are first projected from W to d_model.
        self.proj = nn.Linear(width, spec.d_model)
        self.blocks = nn.ModuleList(EncoderBlock(spec) for _ in range(spec.n_blocks))
        self.hidden = nn.Linear(spec.d_model, spec.head_hidden)
        self.drop = nn.Dropout(spec.head_dropout)
        self.out = nn.Linear(spec.head_hidden, n_outputs)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = self.proj(x)
        for block in self.blocks:
            h = block(h)
        h = h.mean(dim=1)
        h = self.drop(torch.relu(self.hidden(h)))
        return self.out(h)


def build_model(spec: ArchSpec, seq_len: int, width: int, n_outputs: int) -> nn.Module:
    """Instantiate one family for ``(batch, seq_len, width)`` inputs."""
    if spec.family == "logistic":
        return LogisticModel(seq_len, width, n_outputs)
    if spec.family == "cnn":
        return CnnModel(spec, seq_len, width, n_outputs)
    if spec.family == "lstm":
        return LstmModel(spec, width, n_outputs)
    return TransformerModel(spec, width, n_outputs)


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
