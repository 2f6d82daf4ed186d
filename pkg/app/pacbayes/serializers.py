"""Serializers validating experiment configs for the pacbayes app."""
from collections.abc import Mapping

from django.conf import settings
from rest_framework.exceptions import ValidationError
from rest_framework.serializers import (BooleanField, CharField, ChoiceField,
                                        FloatField, IntegerField, ListField,
                                        Serializer)

from .config.fields import (BOUND_REQUIRED_INPUTS, COMMAND_REQUIRED_FIELDS,
                            FIELD_BOUND, FIELD_SEED, FIELD_TRIALS,
                            STOCHASTIC_COMMANDS)
from .config.messages import (ERROR_ENVIRONMENT_SOURCE,
                              ERROR_FIELD_REQUIRED_FOR, ERROR_INVALID_TRIALS,
                              ERROR_RANGE_PAIR, ERROR_SEED_REQUIRED,
                              ERROR_UNKNOWN_FIELD)
from .config.numerics import DEFAULT_CHECK_POINTS, MIN_COVERAGE_TRIALS
from .config.presets import ENVIRONMENT_PRESETS
from .config.strings import (COMMAND_CHOICES, COMMAND_COVERAGE,
                             COUPLING_CHOICES, COUPLING_SHARED,
                             FLAVOR_HOEFFDING, FORMAT_CHOICES, FORMAT_CSV,
                             RULE_CHOICES, RULE_ERM, SLACK_CHOICES)
from .sim.coverage import BOUND_KINDS, EtaPolicy
from .sim.environment import environment_from_preset, environment_from_spec


def _range_field(**kwargs) -> ListField:
    return ListField(
        child=FloatField(),
        min_length=2,
        max_length=2,
        error_messages={'min_length': ERROR_RANGE_PAIR, 'max_length': ERROR_RANGE_PAIR},
        **kwargs,
    )


class StrictSerializer(Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):  # noqa: WPS110
        """Reject unknown keys before the usual field validation.

        Args:
            data: The raw mapping.

        Returns:
            dict: The validated data.

        Raises:
            ValidationError: If the mapping carries undeclared keys.
        """
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise ValidationError({key: [ERROR_UNKNOWN_FIELD] for key in unknown})
        return super().to_internal_value(data)


class LawSerializer(StrictSerializer):
    """One hypothesis's loss law."""

    support = ListField(child=FloatField(), min_length=1)
    probs = ListField(child=FloatField(min_value=0), min_length=1)
    label = CharField(required=False)


class EnvironmentSerializer(StrictSerializer):
    """Environment given either as a named preset or as explicit laws.

    Validates into an :class:`~pacbayes.sim.environment.Environment`.
    """

    preset = ChoiceField(choices=tuple(ENVIRONMENT_PRESETS), required=False)
    laws = LawSerializer(many=True, required=False)
    range = _range_field(required=False)  # noqa: WPS125
    coupling = ChoiceField(choices=COUPLING_CHOICES, default=COUPLING_SHARED)

    def validate(self, attrs):
        """Build the environment.

        Args:
            attrs (dict): The validated fields.

        Returns:
            Environment: The environment described by attrs.

        Raises:
            ValidationError: If neither or both sources are given, or laws come without a range.
        """
        if ('preset' in attrs) == ('laws' in attrs):
            raise ValidationError(ERROR_ENVIRONMENT_SOURCE)
        if 'preset' in attrs:
            return environment_from_preset(attrs['preset'])
        if 'range' not in attrs:
            raise ValidationError({'range': [ERROR_FIELD_REQUIRED_FOR.format(what='explicit laws')]})
        return environment_from_spec(attrs)


class EtaPolicySerializer(StrictSerializer):
    """Learning-rate choices; validates into an EtaPolicy."""

    eta = FloatField(default=1.0)
    u = FloatField(default=0.01)
    v = FloatField(default=1.0)
    alpha = FloatField(required=False)
    check_points = IntegerField(min_value=1, default=DEFAULT_CHECK_POINTS)
    slack = ChoiceField(choices=SLACK_CHOICES, default=FLAVOR_HOEFFDING)
    hypothesis = IntegerField(min_value=0, default=0)

    def validate(self, attrs):
        """Return the EtaPolicy, alpha defaulting to the project setting."""
        attrs.setdefault('alpha', settings.PACBAYES['DEFAULT_ALPHA'])
        return EtaPolicy(**attrs)


class EstimatorSerializer(StrictSerializer):
    """Estimator rule: ERM point mass or Gibbs posterior."""

    rule = ChoiceField(choices=RULE_CHOICES, default=RULE_ERM)
    eta = FloatField(default=1.0)
    alpha = FloatField(min_value=1, required=False)


class BoundInputSerializer(StrictSerializer):
    """Numeric inputs of the bound command."""

    empirical_risk = FloatField(required=False)
    empirical_risks = ListField(child=FloatField(), min_length=1, required=False)
    selected = IntegerField(min_value=0, required=False)
    kl = FloatField(min_value=0, required=False)
    sec_moment = FloatField(min_value=0, required=False)
    ref_empirical_risk = FloatField(required=False)
    b = FloatField(required=False)
    range = _range_field(required=False)  # noqa: WPS125
    eta = FloatField(required=False)


class FixpointSerializer(StrictSerializer):
    """Settings of the fixed-point command."""

    max_iters = IntegerField(min_value=1)
    tol = FloatField(required=False)
    init_prior = ListField(child=FloatField(min_value=0), min_length=1, required=False)


class OutputSerializer(StrictSerializer):
    """Where results go."""

    path = CharField(required=False)
    format = ChoiceField(choices=FORMAT_CHOICES, default=FORMAT_CSV)  # noqa: WPS125
    summary = BooleanField(default=True)


class ExperimentSerializer(StrictSerializer):
    """Top-level experiment config."""

    command = ChoiceField(choices=COMMAND_CHOICES)
    seed = IntegerField(min_value=0, required=False)
    threads = IntegerField(min_value=0, required=False)
    environment = EnvironmentSerializer(required=False)
    n = IntegerField(min_value=1, required=False)
    n_list = ListField(child=IntegerField(min_value=1), min_length=1, required=False)
    delta = FloatField(required=False)
    bound_kind = ChoiceField(choices=tuple(BOUND_KINDS), required=False)
    bound_kinds = ListField(child=ChoiceField(choices=tuple(BOUND_KINDS)), min_length=1, required=False)
    eta = EtaPolicySerializer(required=False)
    estimator = EstimatorSerializer(required=False)
    prior = ListField(child=FloatField(min_value=0), min_length=1, required=False)
    trials = IntegerField(min_value=1, required=False)
    bound = BoundInputSerializer(required=False)
    fixpoint = FixpointSerializer(required=False)
    output = OutputSerializer(required=False)

    def validate(self, attrs):
        """Check the fields each command needs.

        Args:
            attrs (dict): The validated fields.

        Returns:
            dict: attrs unchanged.

        Raises:
            ValidationError: Keyed by the missing or invalid field.
        """
        command = attrs['command']
        missing = {
            name: [ERROR_FIELD_REQUIRED_FOR.format(what=f'command "{command}"')]
            for name in COMMAND_REQUIRED_FIELDS[command] if name not in attrs
        }
        if missing:
            raise ValidationError(missing)
        if command in STOCHASTIC_COMMANDS and FIELD_SEED not in attrs:
            raise ValidationError({FIELD_SEED: [ERROR_SEED_REQUIRED]})
        if command == COMMAND_COVERAGE and attrs[FIELD_TRIALS] < MIN_COVERAGE_TRIALS:
            raise ValidationError({FIELD_TRIALS: [
                ERROR_INVALID_TRIALS.format(minimum=MIN_COVERAGE_TRIALS, trials=attrs[FIELD_TRIALS]),
            ]})
        if FIELD_BOUND in COMMAND_REQUIRED_FIELDS[command]:
            self._validate_bound_inputs(attrs['bound_kind'], attrs[FIELD_BOUND])
        return attrs

    def _validate_bound_inputs(self, kind: str, inputs: dict) -> None:
        missing = {
            name: [ERROR_FIELD_REQUIRED_FOR.format(what=f'bound kind "{kind}"')]
            for name in BOUND_REQUIRED_INPUTS[kind] if name not in inputs
        }
        if missing:
            raise ValidationError({FIELD_BOUND: missing})
