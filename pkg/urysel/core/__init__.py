# names of the invariant suites run by `check`

class Suite:
    metric_axioms = 'metric-axioms'
    saturation = 'saturation'
    observation = 'observation'
    selection = 'selection'
    lift = 'lift'
    domain_rep = 'domain-rep'
    embedding = 'embedding'

    @classmethod
    def names(cls):
        return (cls.metric_axioms, cls.saturation, cls.observation,
                cls.selection, cls.lift, cls.domain_rep, cls.embedding)

    @classmethod
    def __getitem__(cls, key):
        from urysel.exceptions import UnknownSuite

        if key not in cls.names():
            raise UnknownSuite(key)
        return key
