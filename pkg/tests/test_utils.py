import os
import sys
import json
import filecmp
import logging
from difflib import unified_diff

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
from urysel.providers import Logger


def _setup(request, config_file):
    request.cls.config_file = config_file


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as fd:
        json.dump(data, fd)
    return str(path)


class PerformTest:
    """Run the command line twice and compare the reports.

    :param runner: Runner class
    :param config_file: configuration passed by --config
    :param output_dir: directory for the reports
    """
    def __init__(self, runner, config_file, output_dir):
        self.runner = runner
        self.config_file = str(config_file)
        self._output_dir = str(output_dir)

    def report_difference(self, new_output, reference):
        """Report the inconsistency of two report files.

        To be called when output comparison assert fails.

        :return: string message with the stored diff
        """
        diff_fn = new_output + ".diff"
        with open(new_output) as left:
            with open(reference) as right:
                with open(diff_fn, "w") as fd:
                    fd.writelines(
                        unified_diff(left.readlines(), right.readlines())
                    )

        return (
            "Inconsistency in {} compared to {}. "
            "The diff is stored in {}.".format(new_output, reference, diff_fn)
        )

    def _run(self, argv):
        runner = self.runner(["--config", self.config_file] + list(argv))
        Logger.setLevel(logging.ERROR)

        return runner.run()

    def run(self, argv, name, output_option="--out", expected_code=0):
        """Run one command and return the parsed report."""
        target = os.path.join(self._output_dir, name)
        code = self._run(list(argv) + [output_option, target])
        assert code == expected_code, \
            "{} exited with {}".format(" ".join(argv), code)
        assert os.path.exists(target)
        with open(target, encoding="utf-8") as fd:
            return json.load(fd)

    def run_twice(self, argv, name, output_option="--out", expected_code=0):
        """Run one command twice, reports must be byte-identical."""
        first = self.run(argv, name + ".1.json", output_option, expected_code)
        self.run(argv, name + ".2.json", output_option, expected_code)

        left = os.path.join(self._output_dir, name + ".1.json")
        right = os.path.join(self._output_dir, name + ".2.json")
        assert filecmp.cmp(left, right, shallow=False), \
            self.report_difference(left, right)

        return first
