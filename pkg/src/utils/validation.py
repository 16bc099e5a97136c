"""
Input validation for expression text and numeric command-line values
"""
import logging
import math
import re
from dataclasses import dataclass, field

from src.config import default_config
from src.utils.error_handler import ApplicationError, ValidationError

logger = logging.getLogger(__name__)


@dataclass
class ValidationResult:
    """Result of input validation"""
    is_valid: bool
    cleaned_text: str
    warnings: list[str] = field(default_factory=list)
    blocked_patterns: list[str] = field(default_factory=list)
    value: float | None = None


class InputValidator:
    """
    Validator for user-supplied expressions, curve specs and numbers
    Handles emptiness, length limits and characters outside the expression alphabet
    """

    ALLOWED_CHARACTERS = re.compile(r"[0-9A-Za-z_+\-*/^().,\s]")
    PI_MULTIPLE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*pi$", re.IGNORECASE)

    @classmethod
    def validate_expression(cls, text: str, field_name: str = "expression") -> ValidationResult:
        """
        Check expression or curve-spec text before parsing

        Args:
            text: Text to validate
            field_name: Name of the field being validated (for error messages)

        Returns:
            ValidationResult with validation status and cleaned text
        """
        if not text or not isinstance(text, str) or not text.strip():
            return ValidationResult(False, "", [f"{field_name} cannot be empty"])

        text = text.strip()
        limit = default_config.MAX_EXPRESSION_LENGTH
        if len(text) > limit:
            return ValidationResult(
                is_valid=False,
                cleaned_text=text[:limit],
                warnings=[f"{field_name} too long. Maximum {limit} characters"],
            )

        blocked = sorted({ch for ch in text if not cls.ALLOWED_CHARACTERS.fullmatch(ch)})
        if blocked:
            logger.warning(f"Rejected characters in {field_name}: {blocked}")
            return ValidationResult(
                is_valid=False,
                cleaned_text="",
                warnings=[f"{field_name} contains characters outside the expression alphabet"],
                blocked_patterns=blocked,
            )

        return ValidationResult(True, re.sub(r"\s+", " ", text))

    @classmethod
    def validate_number(cls, text: str, field_name: str = "number") -> ValidationResult:
        """
        Accept plain reals, ``pi``, ``7pi`` and constant expressions such as ``7*pi``
        """
        from src.expr.evaluate import constant_value
        from src.expr.parser import parse

        result = cls.validate_expression(text, field_name)
        if not result.is_valid:
            return result

        source = result.cleaned_text
        multiple = cls.PI_MULTIPLE.match(source)
        if multiple:
            coefficient = multiple.group(1)
            if coefficient in ("", "+", "-"):
                coefficient += "1"
            source = f"{coefficient}*pi"

        try:
            value = constant_value(parse(source, variables=()))
        except ApplicationError as err:
            return ValidationResult(False, result.cleaned_text, [f"{field_name}: {err.message}"])

        if not math.isfinite(value):
            return ValidationResult(False, result.cleaned_text, [f"{field_name} must be finite"])
        return ValidationResult(True, result.cleaned_text, value=value)

    @classmethod
    def validate_positive_int(cls, value: int | str, field_name: str = "count") -> ValidationResult:
        try:
            number = int(value)
        except (TypeError, ValueError):
            return ValidationResult(False, str(value), [f"{field_name} must be an integer"])
        if number <= 0:
            return ValidationResult(False, str(value), [f"{field_name} must be positive"])
        return ValidationResult(True, str(number), value=float(number))

    @classmethod
    def require_number(cls, text: str, field_name: str = "number") -> float:
        """Numeric value of ``text`` or a ValidationError"""
        result = cls.validate_number(text, field_name)
        if not result.is_valid:
            raise ValidationError("; ".join(result.warnings), field_name=field_name)
        return float(result.value)

    @classmethod
    def require_expression(cls, text: str, field_name: str = "expression") -> str:
        result = cls.validate_expression(text, field_name)
        if not result.is_valid:
            raise ValidationError("; ".join(result.warnings), field_name=field_name)
        return result.cleaned_text
