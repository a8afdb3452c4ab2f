"""
Tests for the etalg command line: JSON on stdout, exit codes, DOT and store output.
"""

import json
import os

import pytest


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Logs and the certificate store live in the test's temp directory."""
    monkeypatch.setenv('ETALG_LOG_DIR', str(tmp_path / 'logs'))
    monkeypatch.setenv('ETALG_DATABASE_PATH', str(tmp_path / 'etalg.db'))
    monkeypatch.delenv('ETALG_LOG_LEVEL', raising=False)


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding='utf-8')
    return str(path)


def run(capsys, *argv):
    from src.cli import main
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


class TestCommands:
    def test_ktheory_of_catalog_entry(self, capsys):
        code, payload, err = run(capsys, 'ktheory', 'P_DD')
        assert code == 0
        assert payload['schema'] == 'ktheory/v1'
        assert payload['k0_rank'] == 1
        assert payload['k0_basis'] == [[1, 1]]
        assert payload['k1'] == []
        assert payload['run_id'].startswith('run_')
        assert 'etalg ktheory: exit 0' in err

    def test_inspect_invalid(self, capsys, tmp_path):
        path = write(tmp_path, 'bad.json', {'schema': 'presentation/v1', 'k': [1], 'dims': [2],
                                            'alpha': [[1]], 'beta': [[1]]})
        code, payload, _ = run(capsys, 'inspect', path)
        assert code == 1
        assert payload['ok'] is False
        assert payload['violations'][0]['invariant'] == 'unital_row'

    def test_inspect_writes_dot(self, capsys, tmp_path):
        dot = tmp_path / 'pdd.dot'
        code, payload, _ = run(capsys, 'inspect', 'P_DD', '--dot', str(dot))
        assert code == 0
        assert payload['summands'] == 1
        assert dot.read_text().startswith('graph "presentation" {')

    def test_decompose(self, capsys):
        code, payload, _ = run(capsys, 'decompose', 'INT')
        assert code == 0
        assert payload['summands'][0]['blocks'] == {'f1': [0, 1], 'f2': [0]}

    def test_restrict(self, capsys, tmp_path):
        Z = write(tmp_path, 'z.json', {'schema': 'closedset/v1', 'thetas': [0], 'pieces': [[["1/3", 1]]]})
        code, payload, _ = run(capsys, 'restrict', 'P_DD', Z)
        assert code == 0
        assert payload['presentation']['alpha'] == [[0, 1]]
        assert payload['presentation']['beta'] == [[2, 0]]
        assert payload['audit']['ok'] is True
        assert payload['correspondence']['e1'][1]['kind'] == 'right_stub'

    def test_restrict_not_closed(self, capsys, tmp_path):
        Z = write(tmp_path, 'z.json', {'schema': 'closedset/v1', 'pieces': [[[0, "1/2"]]]})
        code, payload, _ = run(capsys, 'restrict', 'INT', Z)
        assert code == 1
        assert payload['error'] == 'NotClosedError'

    def test_discretize(self, capsys, tmp_path):
        Y = write(tmp_path, 'y.json', {'schema': 'closedset/v1',
                                       'pieces': [[["1/10", "1/5"], ["3/10", "2/5"]]]})
        code, payload, _ = run(capsys, 'discretize', 'INT', Y, '--delta', '1')
        assert code == 0
        assert payload['rho']['m'] == 3
        assert payload['components'] == {'identity': 1, 'edge': 1, 'split': 0}
        assert payload['Z']['pieces'] == [[["1/10", "2/5"]]]

    @pytest.mark.parametrize("form", [
        ['--presentation', 'INT', '--set', '{Y}'],
        ['--presentation', 'INT', '{Y}'],
        ['INT', '--set', '{Y}'],
    ])
    def test_discretize_with_flags(self, capsys, tmp_path, form):
        Y = write(tmp_path, 'y.json', {'schema': 'closedset/v1',
                                       'pieces': [[["1/10", "1/5"], ["3/10", "2/5"]]]})
        argv = [arg.format(Y=Y) for arg in form]
        code, payload, _ = run(capsys, 'discretize', *argv, '--delta', '1')
        assert code == 0
        assert payload['components'] == {'identity': 1, 'edge': 1, 'split': 0}

    def test_restrict_with_flags(self, capsys, tmp_path):
        Z = write(tmp_path, 'z.json', {'schema': 'closedset/v1', 'thetas': [0], 'pieces': [[["1/3", 1]]]})
        code, payload, _ = run(capsys, 'restrict', '--presentation', 'P_DD', '--set', Z)
        assert code == 0
        assert payload['presentation']['alpha'] == [[0, 1]]

    @pytest.mark.parametrize("second,expected", [("9/32", 0), ("7/8", 1)])
    def test_pair(self, capsys, tmp_path, second, expected):
        first = write(tmp_path, 'a.json', {'schema': 'spectrum/v1', 'theta_mult': [0, 0],
                                           'interior': [{'i': 0, 't': "1/4"}]})
        other = write(tmp_path, 'b.json', {'schema': 'spectrum/v1', 'theta_mult': [0, 0],
                                           'interior': [{'i': 0, 't': second}]})
        code, payload, _ = run(capsys, 'pair', 'INT', first, other, '--m', '8')
        assert code == expected
        assert payload['schema'] == 'pairing/v1'

    def test_check_injective(self, capsys, tmp_path):
        from src.export import dumps
        from src.patterns import identity_pattern
        from src.selftest.generators import interval_pullback
        from src.spectrum import PLMap
        from src.algebra import interval_algebra
        from fractions import Fraction as F
        injective = write(tmp_path, 'id.json', dumps(identity_pattern(interval_algebra())))
        half = write(tmp_path, 'half.json', dumps(interval_pullback(PLMap([(0, 0), (1, F(1, 2))]))))

        code, payload, _ = run(capsys, 'check-injective', injective)
        assert (code, payload['injective']) == (0, True)
        code, payload, _ = run(capsys, 'check-injective', half)
        assert (code, payload['injective']) == (1, False)
        assert payload['missing_thetas'] == [1]

    def test_rewrite_chain(self, capsys, tmp_path):
        from src.export import chain_to_dict, dumps
        from src.selftest.generators import half_interval_chain
        chain = write(tmp_path, 'chain.json', dumps(chain_to_dict(half_interval_chain())))
        dot = tmp_path / 'chain.dot'
        code, payload, err = run(capsys, 'rewrite-chain', chain, '--seed', '5', '--dot', str(dot))
        assert code == 0
        assert payload['schema'] == 'cert/v1'
        assert payload['seed'] == 5
        assert payload['audit']['ok'] is True
        assert 'certificate verified' in err
        assert 'cluster_1' in dot.read_text()

    def test_bridge(self, capsys):
        code, payload, _ = run(capsys, 'bridge', '--n', '2', '--seed', '0', '--eps', '1/2', '--samples', '4')
        assert code == 0
        assert payload['schema'] == 'bridge/v1'
        assert payload['seed'] == 0
        assert payload['ok'] is True

    def test_selftest(self, capsys):
        code, payload, _ = run(capsys, 'selftest', '--seed', '1', '--suite', 'surjection', '--cases', '3')
        assert code == 0
        assert payload['suites'][0]['cases'] == 3


class TestErrors:
    """Exit codes 1, 2 and 3."""

    def test_unknown_command(self, capsys):
        from src.cli import main
        with pytest.raises(SystemExit) as exc:
            main(['frobnicate'])
        assert exc.value.code == 2

    def test_float_is_schema_error(self, capsys, tmp_path):
        Z = write(tmp_path, 'z.json', {'schema': 'closedset/v1', 'thetas': [0], 'pieces': [[[0.25, 1]]]})
        code, payload, _ = run(capsys, 'restrict', 'INT', Z)
        assert code == 2
        assert payload['error'] == 'SchemaError'
        assert payload['pointer'] == '/pieces/0/0/0'

    def test_missing_file(self, capsys, tmp_path):
        code, payload, _ = run(capsys, 'ktheory', str(tmp_path / 'nope.json'))
        assert code == 2
        assert payload['schema'] == 'error/v1'

    @pytest.mark.parametrize("argv", [
        ['ktheory'],
        ['restrict', 'INT'],
        ['ktheory', 'INT', '--presentation', 'INT'],
    ])
    def test_inputs_given_wrongly(self, capsys, argv):
        from src.cli import main
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_bad_delta(self, capsys):
        from src.cli import main
        with pytest.raises(SystemExit) as exc:
            main(['discretize', 'INT', 'y.json', '--delta', '0.5'])
        assert exc.value.code == 2


class TestStore:
    def test_run_is_recorded(self, capsys, tmp_path):
        from src.storage import CertificateStore
        code, payload, _ = run(capsys, '--store', 'ktheory', 'INT')
        assert code == 0

        store = CertificateStore(os.environ['ETALG_DATABASE_PATH'])
        record = store.get_run(payload['run_id'])
        assert record['command'] == 'ktheory'
        assert record['exit_code'] == 0
        documents = store.get_documents(payload['run_id'])
        assert len(documents) == 1
        store.engine.dispose()


class TestRunLog:
    """Every command writes logs/runs/<run_id>.log."""

    def read_run_log(self, tmp_path, run_id):
        path = tmp_path / 'logs' / 'runs' / f'{run_id}.log'
        assert path.exists()
        return [json.loads(line) for line in path.read_text(encoding='utf-8').splitlines() if line]

    def test_success_is_logged(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv('ETALG_JSON_LOGS', 'true')
        code, payload, _ = run(capsys, 'ktheory', 'INT')
        assert code == 0

        entries = self.read_run_log(tmp_path, payload['run_id'])
        assert [e['event'] for e in entries] == ['command_started', 'command_finished']
        assert all(e['run_id'] == payload['run_id'] for e in entries)
        assert entries[0]['argv'] == ['ktheory', 'INT']
        assert entries[-1]['exit_code'] == 0

    def test_failure_is_logged(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv('ETALG_JSON_LOGS', 'true')
        code, payload, _ = run(capsys, 'ktheory', str(tmp_path / 'nope.json'))
        assert code == 2

        entries = self.read_run_log(tmp_path, payload['run_id'])
        assert [e['event'] for e in entries] == ['command_started', 'command_failed', 'command_finished']
        assert entries[-1]['exit_code'] == 2
