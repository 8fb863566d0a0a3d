/* Decoupled model of the OpenBSD octrng(4) hardware random number driver.
 * Single preprocessed translation unit: constants are enums, the bus and
 * device registers are mimicked by local state, and the periodic callback
 * is queued on a small circular task ring.
 *
 * See README.md in this directory for the modeling notes.
 */

enum {
    OCTRNG_ENABLE_OUTPUT  = 1 << 1,
    OCTRNG_ENABLE_ENTROPY = 1 << 0,
    OCTRNG_ENTROPY_REG    = 0,
    MAX_QUEUE             = 8,
    TIMEOUT               = 100
};

enum { OCTRNG_CONTROL_ADDR = 0x0001180040000000 };

struct rng_device {
    unsigned long control_addr;  /* current value of the control register */
};

struct task {
    unsigned int timeout;        /* delay in time units */
    unsigned int start;          /* arrival time */
    void (*timeout_fun)(void);   /* callback; 0 marks a free slot */
};

static struct rng_device rng_regs;
static unsigned int timer;
static int rand_value;
static unsigned int running_tasks;
static unsigned int current_tasks;
static struct task tasks[MAX_QUEUE];

void octrng_rnd(void);

/* Register access decoupled from the bus: reads return the stored control
 * value, or the timer when both enable flags are set (the model's source of
 * "randomness"). */
unsigned int get_register(unsigned long addr)
{
    if (addr == OCTRNG_CONTROL_ADDR)
        return (unsigned int)rng_regs.control_addr;
    if (addr == OCTRNG_ENTROPY_REG) {
        if ((rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
            && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0)
            return timer;
        return 0;
    }
    return 0;
}

void set_register(unsigned long addr, unsigned long value)
{
    if (addr == OCTRNG_CONTROL_ADDR)
        rng_regs.control_addr = value;
}

/* Queue fun() to run timeout units in the future. The ring index always
 * advances modulo MAX_QUEUE; a full queue fails the request. */
int add_task(void (*fun)(void), unsigned int timeout)
{
    unsigned int slot;

    if (running_tasks >= MAX_QUEUE)
        return -1;
    slot = current_tasks % MAX_QUEUE;
    tasks[slot].timeout = timeout;
    tasks[slot].start = timer;
    tasks[slot].timeout_fun = fun;
    current_tasks = (slot + 1) % MAX_QUEUE;
    running_tasks = running_tasks + 1;
    return 0;
}

/*@ requires true;
    ensures (rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
         && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0; @*/
void octrng_attach(void)
{
    unsigned long control_reg;

    control_reg = get_register(OCTRNG_CONTROL_ADDR);
    control_reg |= OCTRNG_ENABLE_OUTPUT;
    control_reg |= OCTRNG_ENABLE_ENTROPY;
    set_register(OCTRNG_CONTROL_ADDR, control_reg);

    add_task(octrng_rnd, 5);
}

/*@ requires timer == a
          && running_tasks < MAX_QUEUE
          && current_tasks < MAX_QUEUE
          && (rng_regs.control_addr & OCTRNG_ENABLE_OUTPUT) != 0
          && (rng_regs.control_addr & OCTRNG_ENABLE_ENTROPY) != 0;
    ensures rand_value == a;
    total; @*/
void octrng_rnd(void)
{
    unsigned int value;

    rand_value = get_register(OCTRNG_ENTROPY_REG);
    add_task(octrng_rnd, 10);
}
