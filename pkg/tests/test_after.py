import logging
import random
import unittest.mock

from treematch import _utils  # noqa
from treematch import after_log
from treematch.after import PairCallState, after_nothing
from treematch.methods import ged_bp

from .test_methods import labelled_dataset


def make_pair_state(pair_number, seconds, cost=2.0):
    """Construct PairCallState for given pair number & seconds spent on it."""
    return PairCallState(ged_bp(labelled_dataset(count=3)), 0, 2, seconds, cost, pair_number)


class TestAfterLogFormat(unittest.TestCase):
    def setUp(self) -> None:
        self.log_level = random.choice((logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL))
        self.pair_number = random.randint(1, 512)

    def test_01_default(self):
        """Test log formatting."""
        log = unittest.mock.MagicMock(spec="logging.Logger.log")
        logger = unittest.mock.MagicMock(spec="logging.Logger", log=log)

        sec_format = "%0.3f"
        pair_state = make_pair_state(self.pair_number, 0.1)
        fun = after_log(logger=logger, log_level=self.log_level)  # use default sec_format
        fun(pair_state)
        log.assert_called_once_with(
            self.log_level,
            f"Finished pair (0, 2) with 'bp' "
            f"after {sec_format % pair_state.seconds}(s), distance 2.0, "
            f"this was the {_utils.to_ordinal(pair_state.pair_number)} pair.",
        )

    def test_02_custom_sec_format(self):
        """Test log formatting with custom int format.."""
        log = unittest.mock.MagicMock(spec="logging.Logger.log")
        logger = unittest.mock.MagicMock(spec="logging.Logger", log=log)

        sec_format = "%.1f"
        pair_state = make_pair_state(self.pair_number, 0.1, cost=0.5)
        fun = after_log(logger=logger, log_level=self.log_level, sec_format=sec_format)
        fun(pair_state)
        log.assert_called_once_with(
            self.log_level,
            f"Finished pair (0, 2) with 'bp' after 0.1(s), distance 0.5, "
            f"this was the {_utils.to_ordinal(pair_state.pair_number)} pair.",
        )

    def test_03_plain_callable_name(self):
        """Callables without a name report their qualified name."""
        log = unittest.mock.MagicMock(spec="logging.Logger.log")
        logger = unittest.mock.MagicMock(spec="logging.Logger", log=log)

        pair_state = make_pair_state(1, 0.0)._replace(method=after_nothing)
        after_log(logger=logger, log_level=logging.INFO)(pair_state)
        message = log.call_args[0][1]
        self.assertIn("'treematch.after.after_nothing'", message)
        self.assertIn("the 1st pair", message)


class TestOrdinal(unittest.TestCase):
    def test_suffixes(self):
        self.assertEqual(
            [_utils.to_ordinal(n) for n in (1, 2, 3, 4, 11, 12, 13, 21, 22, 101, 111, 112, 1013)],
            ["1st", "2nd", "3rd", "4th", "11th", "12th", "13th", "21st", "22nd", "101st", "111th", "112th", "1013th"],
        )
