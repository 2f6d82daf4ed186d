"""Named environments shipped with the app; every entry is fully specified here."""
from .strings import COUPLING_SHARED

BERNOULLI_GRID_MEANS = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)


def _bernoulli(p: float, label: str) -> dict:
    return {'support': (0.0, 1.0), 'probs': (1 - p, p), 'label': label}


ENVIRONMENT_PRESETS = {
    'bernoulli_single': {
        'laws': (_bernoulli(0.5, 'fair'),),
        'range': (0.0, 1.0),
        'coupling': COUPLING_SHARED,
    },
    'bernoulli_grid10': {
        'laws': tuple(_bernoulli(p, f'p={p:g}') for p in BERNOULLI_GRID_MEANS),
        'range': (0.0, 1.0),
        'coupling': COUPLING_SHARED,
    },
    'asymmetric3': {
        'laws': (
            {'support': (0.0, 0.25, 1.0), 'probs': (0.7, 0.2, 0.1), 'label': 'skew-low'},
            {'support': (0.0, 0.25, 1.0), 'probs': (0.5, 0.4, 0.1), 'label': 'skew-mid'},
            {'support': (0.0, 0.25, 1.0), 'probs': (0.2, 0.3, 0.5), 'label': 'skew-high'},
        ),
        'range': (0.0, 1.0),
        'coupling': COUPLING_SHARED,
    },
    'lowvar': {
        'laws': (_bernoulli(0.01, 'p=0.01'), _bernoulli(0.03, 'p=0.03')),
        'range': (0.0, 1.0),
        'coupling': COUPLING_SHARED,
    },
    'bernoulli_pair': {
        'laws': (_bernoulli(0.3, 'p=0.3'), _bernoulli(0.4, 'p=0.4')),
        'range': (0.0, 1.0),
        'coupling': COUPLING_SHARED,
    },
}
