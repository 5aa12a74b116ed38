"""Draw records binding a sampled index to its draw-time probability."""
from dataclasses import dataclass, field

from .errors import StaleTicket


@dataclass(frozen=True)
class SampleTicket:
    """One draw: the index, the probability it had when drawn, and the round.

    Bandit updates must divide by ``prob``, never by a probability read
    later, since the distribution may have moved in between.
    """

    index: int
    prob: float
    round: int
    serial: int = field(default=-1, compare=False)
    owner: object = field(default=None, compare=False, repr=False)


class TicketIssuer:
    """Bookkeeping for samplers that hand out single-use tickets."""

    def _init_tickets(self):
        self._next_serial = 0
        self._outstanding = set()

    def _issue(self, index, prob, round_):
        serial = self._next_serial
        self._next_serial += 1
        self._outstanding.add(serial)
        return SampleTicket(int(index), float(prob), int(round_), serial, self)

    def _consume(self, ticket):
        if ticket.owner is not self or ticket.serial not in self._outstanding:
            raise StaleTicket(f"ticket {ticket!r} was already used or belongs to another sampler")
        self._outstanding.remove(ticket.serial)

    @property
    def outstanding(self):
        """Number of drawn tickets not yet fed back."""
        return len(self._outstanding)
