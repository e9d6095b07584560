import json
import sys
import tempfile
import unittest
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from phasewave.converters.input_converter import InputConverter  # noqa: E402
from phasewave.core.eos import IDEAL_GAS, TABLE1_LIQUID, TABLE1_VAPOR, params_to_dict  # noqa: E402
from phasewave.core.errors import ConfigError  # noqa: E402
from phasewave.core.riemann import PrimitiveState  # noqa: E402


class InputConverterTest(unittest.TestCase):
    def setUp(self) -> None:
        self.inputs = InputConverter()

    def test_single_phase_presets(self) -> None:
        self.assertEqual(self.inputs.resolve_params("ideal-gas"), IDEAL_GAS)
        self.assertEqual(self.inputs.resolve_params(" TABLE1-liquid "), TABLE1_LIQUID)
        with self.assertRaises(ConfigError):
            self.inputs.resolve_params("")
        with self.assertRaises(ConfigError):
            self.inputs.resolve_params("steam")

    def test_phase_pair_sources(self) -> None:
        self.assertEqual(self.inputs.resolve_phase_pair(None), (TABLE1_VAPOR, TABLE1_LIQUID))
        self.assertEqual(
            self.inputs.resolve_phase_pair("ideal-gas,table1-liquid"), (IDEAL_GAS, TABLE1_LIQUID)
        )
        with self.assertRaises(ConfigError):
            self.inputs.resolve_phase_pair("table2")

    def test_phase_pair_from_json_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            good = Path(tmp) / "pair.json"
            good.write_text(
                json.dumps({"vapor": params_to_dict(TABLE1_VAPOR), "liquid": params_to_dict(TABLE1_LIQUID)}),
                encoding="utf-8",
            )
            partial = Path(tmp) / "partial.json"
            partial.write_text(json.dumps({"vapor": params_to_dict(TABLE1_VAPOR)}), encoding="utf-8")

            self.assertEqual(self.inputs.resolve_phase_pair(str(good)), (TABLE1_VAPOR, TABLE1_LIQUID))
            with self.assertRaises(ConfigError):
                self.inputs.resolve_phase_pair(str(partial))

    def test_parse_state_and_anchor(self) -> None:
        self.assertEqual(self.inputs.parse_state("1, 0, 1e5"), PrimitiveState(rho=1.0, u=0.0, p=1e5))
        self.assertEqual(self.inputs.parse_anchor("1e5,400"), (1e5, 400.0))

    def test_malformed_numbers(self) -> None:
        with self.assertRaises(ConfigError):
            self.inputs.parse_state("1,0")
        with self.assertRaises(ConfigError):
            self.inputs.parse_state("1,,0")
        with self.assertRaises(ConfigError):
            self.inputs.parse_anchor("1e5,hot")


if __name__ == "__main__":
    unittest.main()
