"""
Unit tests for the error handling system.

Tests error classification, exit codes, user messages and the command decorator.
"""
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

from src.utils.error_handler import (ApplicationError, ChartError, ConvexityError, ErrorCategory, ErrorContext,
                                     ErrorHandler, ErrorSeverity, ExpressionDomainError, ExpressionSyntaxError,
                                     RenderError, SingularPointError, UnknownIdentifierError, ValidationError,
                                     handle_errors)


class TestErrorClassification(unittest.TestCase):
    """Test error classification and categorization."""

    def setUp(self):
        """Set up test fixtures."""
        self.error_handler = ErrorHandler("test_logger")

    def test_application_error_creation(self):
        """Test ApplicationError creation with context."""
        context = ErrorContext(operation="dual", request_data={"curve": "parabola"})
        error = ApplicationError("boom", ErrorCategory.DUALITY_ERROR, ErrorSeverity.HIGH, context)

        self.assertEqual(error.message, "boom")
        self.assertEqual(error.category, ErrorCategory.DUALITY_ERROR)
        self.assertEqual(error.context.operation, "dual")

    def test_specific_errors_carry_details(self):
        """Test that specialised errors keep their extra fields."""
        syntax = ExpressionSyntaxError("bad", offset=3, expected=frozenset({"number"}))
        self.assertEqual(syntax.offset, 3)
        self.assertEqual(syntax.category, ErrorCategory.PARSE_ERROR)

        unknown = UnknownIdentifierError("q", offset=5, allowed=frozenset({"x"}))
        self.assertIsInstance(unknown, ExpressionSyntaxError)
        self.assertEqual(unknown.name, "q")

        singular = SingularPointError("stop", t=0.5, hint="Singular(2)")
        self.assertEqual(singular.t, 0.5)
        self.assertEqual(singular.hint, "Singular(2)")

        domain = ExpressionDomainError("ln of -1", subexpression="ln(x)")
        self.assertEqual(domain.subexpression, "ln(x)")

    def test_exit_codes(self):
        """Usage errors exit with 2, computational errors with 1."""
        self.assertEqual(self.error_handler.handle_error(ValidationError("bad"))[1], 2)
        self.assertEqual(self.error_handler.handle_error(ExpressionSyntaxError("bad", 0))[1], 2)
        self.assertEqual(self.error_handler.handle_error(ConvexityError("x^3"))[1], 1)
        self.assertEqual(self.error_handler.handle_error(ChartError("vertical"))[1], 1)
        self.assertEqual(self.error_handler.handle_error(RenderError("empty"))[1], 1)

    def test_standard_exception_conversion(self):
        """Test conversion of built-in exceptions."""
        message, code = self.error_handler.handle_error(ValueError("not a number"))
        self.assertTrue(message.startswith("Invalid input"))
        self.assertEqual(code, 2)

        message, code = self.error_handler.handle_error(ZeroDivisionError("division by zero"))
        self.assertTrue(message.startswith("Expression evaluated outside its domain"))
        self.assertEqual(code, 1)

        message, code = self.error_handler.handle_error(RuntimeError("surprise"))
        self.assertTrue(message.startswith("Unexpected error"))
        self.assertEqual(code, 1)

    def test_syntax_message_lists_expected_tokens(self):
        """Test that parse failures name what was expected."""
        message, _ = self.error_handler.describe(
            ExpressionSyntaxError("unexpected end of input at offset 3", 3, frozenset({"number", "("})))
        self.assertIn("expected one of: (, number", message)

    def test_statistics(self):
        """Test error statistics and history reset."""
        self.error_handler.handle_error(ChartError("a"))
        self.error_handler.handle_error(ChartError("b"))
        stats = self.error_handler.get_error_statistics()
        self.assertEqual(stats["total_errors"], 2)
        self.assertEqual(stats["errors_by_category"], {"chart_error": 2})

        self.error_handler.clear_error_history()
        self.assertEqual(self.error_handler.get_error_statistics()["total_errors"], 0)

    def test_describe_does_not_record(self):
        """describe maps an error without touching the history."""
        self.error_handler.describe(ChartError("a"))
        self.assertEqual(self.error_handler.error_history, [])


class TestErrorDecorator(unittest.TestCase):
    """Test the command decorator."""

    def test_records_and_reraises(self):
        """Failures are recorded with the operation name and re-raised."""
        handler = ErrorHandler("test_decorator")

        @handle_errors(error_handler=handler, context=ErrorContext(operation="conjugate"))
        def failing():
            raise ConvexityError("f'' < 0", probe=0.0)

        with self.assertRaises(ConvexityError):
            failing()
        self.assertEqual(len(handler.error_history), 1)
        self.assertEqual(handler.error_history[0].context.operation, "conjugate")

    def test_passes_results_through(self):
        """Successful calls are untouched."""
        @handle_errors(error_handler=ErrorHandler("test_decorator"))
        def working(x):
            return x * 2

        self.assertEqual(working(21), 42)
        self.assertEqual(working.__name__, "working")


if __name__ == "__main__":
    unittest.main()
